#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gphi/contraction.hpp"
#include "gphi/gauges.hpp"
#include "gphi/spaces.hpp"

namespace gphi {

enum class StopReason { ExactFixedPoint, ToleranceMet, BudgetExhausted };
std::string_view to_string(StopReason r) noexcept;

struct PicardOptions {
  std::size_t max_iter = 10'000;
  double tol = 1e-10;
  /// Consecutive sub-tolerance steps needed for ToleranceMet.
  std::size_t confirm = 3;
  /// Longer orbits keep a strided head plus the last `tail_keep` points.
  std::size_t record_cap = 100'000;
  std::size_t tail_keep = 1'000;
};

/// Orbit x_k = T^k x0. Entry i of `orbit` is x_{indices[i]}; `step_dists[i]`
/// is d(x_k, x_{k+1}) for k = indices[i]. Uncompressed traces have
/// indices[i] == i.
struct PicardTrace {
  Point x0;
  std::vector<std::size_t> indices;
  std::vector<Point> orbit;
  std::vector<double> step_dists;
  StopReason stop_reason = StopReason::BudgetExhausted;
  std::optional<Point> fixed_point;
  std::size_t k_stop = 0;
  /// Set when a finite orbit re-entered an earlier non-fixed point.
  std::optional<std::size_t> cycle_length;

  /// Number of orbit indices covered (last index + 1).
  std::size_t length() const { return indices.empty() ? 0 : indices.back() + 1; }
  std::optional<Point> at(std::size_t k) const;
  std::optional<double> step_at(std::size_t k) const;
};

PicardTrace picard_iterate(const Space& space, const OperatorSpec& op, const Point& x0,
                           const PicardOptions& options = {});

/// Applies T to the last point until the trace covers `length` indices.
void extend_trace(const Space& space, const OperatorSpec& op, PicardTrace& trace,
                  std::size_t length);

std::vector<std::size_t> enumerate_fixed_points(const FiniteSpace& space, const OperatorSpec& op);

/// G1 case: the orbit must become exactly constant after finitely many steps.
bool verify_g1_termination(const PicardTrace& trace);

/// Smallest m >= 1 with d(x_{(m+1)n}, x_{mn}) < eps / (2s), orbit recomputed from x0.
std::size_t m_epsilon(const Space& space, const OperatorSpec& op, const Point& x0, std::size_t n,
                      double eps, std::size_t budget = 10'000);

struct BallCheck {
  bool holds = true;
  std::size_t checked = 0;
  std::optional<Point> witness;
};

/// T^n(B(x_{mn}, eps)) inside B(x_{mn}, eps): every point of the ball on finite
/// spaces, `samples` evenly spaced points on analytic ones.
BallCheck verify_invariant_ball(const Space& space, const OperatorSpec& op,
                                const PicardTrace& trace, double eps, std::size_t n,
                                std::size_t m, std::size_t samples = 1024);

struct StepChaining {
  std::size_t k0 = 0;
  std::size_t m0 = 1;
  double threshold = 0.0;
  double max_distance = 0.0;
  double max_chained_bound = 0.0;
  std::size_t blocks_checked = 0;
  bool holds = true;
};

StepChaining verify_step_chaining(const Space& space, const PicardTrace& trace, std::size_t n,
                                  double eps);

struct CauchyDiagnostics {
  double eps = 0.0;
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t m0 = 0;
  std::size_t m_bar = 0;
  double bound = 0.0;
  double max_observed = 0.0;
  std::size_t pairs_checked = 0;
  bool holds = false;
};

struct ProofOptions {
  std::vector<double> grid;
  double level = 1.0;
  std::size_t n_budget = 10'000;
  std::size_t m_budget = 10'000;
  std::size_t max_pairs = 1'000'000;
  std::size_t subsample_pairs = 10'000;
};

/// d(x_{k1}, x_{k2}) <= 4 s^3 eps for every recorded k1, k2 >= m_bar * n.
CauchyDiagnostics verify_cauchy_bound(const Space& space, const OperatorSpec& op,
                                      const PicardTrace& trace, const GaugeSpec& g,
                                      const PhiSpec& phi, double eps,
                                      const ProofOptions& options = {});

/// Every quantitative lemma of the G2 case, run on one orbit.
struct G2Diagnostics {
  double eps0 = 0.0;
  double eps = 0.0;
  std::size_t n = 0;
  std::size_t m = 0;
  BallCheck ball;
  StepChaining chaining;
  CauchyDiagnostics cauchy;
  PicardTrace trace;
  bool holds() const { return ball.holds && chaining.holds && cauchy.holds; }
};

/// eps defaults to epsilon0 / 2. The trace is extended as far as the lemmas
/// need (up to `max_length`).
G2Diagnostics verify_g2_lemmas(const Space& space, const OperatorSpec& op, const Point& x0,
                               const GaugeSpec& g, const PhiSpec& phi,
                               std::optional<double> eps = std::nullopt,
                               const PicardOptions& picard = {}, const ProofOptions& options = {},
                               std::size_t max_length = 100'000);

}  // namespace gphi
