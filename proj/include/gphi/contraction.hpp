#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gphi/gauges.hpp"
#include "gphi/spaces.hpp"

namespace gphi {

struct FiniteMap {
  std::vector<std::size_t> image;
};
struct AffineMap {
  double a;
  double b;
};
/// Piecewise-linear monotone map through sorted knots, constant outside them.
struct MonotoneTableMap {
  std::vector<std::pair<double, double>> knots;
};

class OperatorSpec {
public:
  using Kind = std::variant<FiniteMap, AffineMap, MonotoneTableMap>;

  static OperatorSpec finite_map(std::vector<std::size_t> image);
  static OperatorSpec affine(double a, double b);
  static OperatorSpec monotone_table(std::vector<std::pair<double, double>> knots);

  const Kind& kind() const noexcept { return kind_; }
  std::string describe() const;

private:
  explicit OperatorSpec(Kind k) : kind_(std::move(k)) {}
  Kind kind_;
};

/// Throws NotSelfMap unless T maps the space into itself.
void validate_operator(const Space& space, const OperatorSpec& op);

Point apply(const OperatorSpec& op, const Space& space, const Point& x);

struct SamplingMode {
  enum class Kind { Exhaustive, Random };
  Kind kind = Kind::Exhaustive;
  std::uint64_t seed = 0;
  std::size_t count = 4096;

  static SamplingMode exhaustive() { return {}; }
  static SamplingMode random(std::uint64_t seed, std::size_t count = 4096) {
    return {Kind::Random, seed, count};
  }
};

enum class ContractionVerdict { Certified, Violated, Inconclusive };
std::string_view to_string(ContractionVerdict v) noexcept;

/// First failing pair. `lhs > rhs` is the failed inequality, in whatever
/// units the certifier compares (G-values, F-values or raw distances).
struct ContractionWitness {
  Point x;
  Point y;
  double d_xy = 0.0;
  double d_txty = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct ContractionCertificate {
  ContractionVerdict verdict = ContractionVerdict::Inconclusive;
  SamplingMode mode;
  std::size_t checked_pairs = 0;
  std::size_t vacuous_pairs = 0;
  /// Random mode only: no sampled pair failed.
  bool sample_clean = false;
  std::optional<ContractionWitness> witness;
  std::string condition;
  std::string provenance;
  std::string warning;
  std::string note;
};

/// Condition (G): d(Tx, Ty) != 0 implies G(d(Tx, Ty)) <= phi(G(d(x, y))).
///
/// Finite spaces are checked on every unordered pair in lexicographic order;
/// analytic spaces on a seeded low-discrepancy sample of pairs. The witness
/// is the first failing pair in that order.
ContractionCertificate certify_condition_G(const Space& space, const OperatorSpec& op,
                                           const GaugeSpec& g, const PhiSpec& phi,
                                           SamplingMode mode = SamplingMode::exhaustive());

/// F(d(Tx, Ty)) <= psi(F(d(x, y))) evaluated directly, over the same pairs
/// and in the same order as certify_condition_G.
ContractionCertificate certify_f_inequality(const Space& space, const OperatorSpec& op,
                                            const Form& f, const Form& psi,
                                            SamplingMode mode = SamplingMode::exhaustive());

/// d(Tx, Ty) <= psi_c(d(x, y)) for a comparison function acting on distances.
ContractionCertificate certify_comparison_form(const Space& space, const OperatorSpec& op,
                                               const PhiSpec& psi_c,
                                               SamplingMode mode = SamplingMode::exhaustive());

struct FContractionAdapter {
  GaugeSpec gauge;
  PhiSpec phi;
  /// psi^n(t) fell below -745 (exp underflow) within the budget at every test point.
  bool psi_diverges = false;
};

/// G = e^F and phi = exp o psi o ln. Throws PsiNotNondecreasing when psi
/// decreases between two test points.
FContractionAdapter from_f_contraction(const Form& f, const Form& psi,
                                       std::span<const double> test_grid = {},
                                       std::size_t budget = 100'000);

/// G^-1 o phi o G. Throws NotInvertible for gauges without an inverse and
/// DomainRestricted when the composite leaves (0, inf) near 0.
PhiSpec to_czerwik_form(const GaugeSpec& g, const PhiSpec& phi);

}  // namespace gphi
