#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gphi/contraction.hpp"
#include "gphi/gauges.hpp"
#include "gphi/solver.hpp"
#include "gphi/spaces.hpp"

namespace gphi {

/// Symmetric off-diagonal entries uniform on (0, scale]; s = s_min.
FiniteSpace generate_space(std::uint64_t seed, std::size_t n, double scale);

/// Uniform self-map, or with `bias_contractive` a map that sends every point
/// either to a random anchor or to a random point strictly closer to it.
OperatorSpec generate_operator(std::uint64_t seed, const FiniteSpace& space,
                               bool bias_contractive);

enum class BreakMode { None, DropContraction, DropPhi };
std::string_view to_string(BreakMode m) noexcept;
BreakMode break_mode_from_string(std::string_view s);

struct FuzzConfig {
  std::uint64_t seed = 0;
  std::size_t trials = 100;
  std::size_t max_points = 8;
  double min_scale = 1.0;
  double max_scale = 10.0;
  std::vector<GaugeSpec> gauge_catalog = default_gauge_catalog();
  std::vector<PhiSpec> phi_catalog = default_phi_catalog();
  BreakMode break_mode = BreakMode::None;
  /// 0 picks the hardware concurrency. Output does not depend on it.
  unsigned threads = 0;
  int grid_density = 512;
  /// Phi certification: iterates must fall below phi_tol within phi_budget
  /// steps from every grid point in [1/phi_span, phi_span].
  double phi_span = 1e6;
  double phi_tol = 1e-5;
  std::size_t phi_budget = 1'000'000;
};

/// One counterexample: everything needed to replay it.
struct ViolationBundle {
  std::size_t trial;
  std::uint64_t seed;
  FiniteSpace space;
  OperatorSpec op;
  GaugeSpec g;
  PhiSpec phi;
  std::string reason;
  std::optional<PicardTrace> trace;
};

struct LemmaTally {
  std::size_t checked = 0;
  std::size_t passed = 0;
};

struct FuzzReport {
  FuzzConfig config;
  std::size_t trials_run = 0;
  std::size_t certified_count = 0;
  std::size_t theorem_holds_count = 0;
  std::size_t g1_instances = 0;
  std::size_t g2_instances = 0;
  /// Break modes: instances whose weakened hypotheses still passed the
  /// remaining checks, and how many of those then broke the conclusion.
  std::size_t broken_certified = 0;
  std::size_t expected_violations = 0;
  std::vector<ViolationBundle> violations;
  std::map<std::string, LemmaTally> lemmas;
  /// Catalog certification, in catalog order.
  std::vector<ClassCertificate> gauge_classes;
  std::vector<PhiCertificate> phi_members;
};

/// Throws ConfigInvalid for trials == 0, max_points < 2, empty catalogs or a
/// bad scale range.
FuzzReport fuzz(const FuzzConfig& config);

}  // namespace gphi
