#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace gphi {

/// Three-valued outcome of a sampled certification.
enum class Verdict { Yes, No, Inconclusive };
std::string_view to_string(Verdict v) noexcept;

/// Closed real form used for F and psi: either a*t + b or a*ln(t) + b.
struct Form {
  enum class Kind { Affine, LogAffine };
  Kind kind = Kind::Affine;
  double a = 1.0;
  double b = 0.0;

  static Form affine(double a, double b) { return {Kind::Affine, a, b}; }
  static Form log_affine(double a, double b) { return {Kind::LogAffine, a, b}; }
  static Form ln() { return log_affine(1.0, 0.0); }

  double operator()(double t) const;
  /// Solves form(t) = y; empty when a == 0.
  std::optional<double> inverse(double y) const;
  std::string describe() const;
};

/// Breakpoints (t, value) sorted by t; right-constant steps, first value below
/// the first breakpoint.
struct Tabulated {
  std::vector<std::pair<double, double>> points;
  double operator()(double t) const;
};

class GaugeSpec;
class PhiSpec;

struct LinearPhi { double c; };
struct HyperbolicPhi { double a; };
/// phi = exp o psi o ln, the image of an F-contraction's psi.
struct ExpPsiLogPhi { Form psi; };
/// phi = G^-1 o inner o G.
struct ConjugatePhi {
  std::shared_ptr<const GaugeSpec> gauge;
  std::shared_ptr<const PhiSpec> inner;
};

/// Candidate comparison function phi: (0, inf) -> (0, inf).
class PhiSpec {
public:
  using Family = std::variant<LinearPhi, HyperbolicPhi, Tabulated, ExpPsiLogPhi, ConjugatePhi>;

  static PhiSpec linear(double c);
  static PhiSpec hyperbolic(double a);
  static PhiSpec tabulated(std::vector<std::pair<double, double>> points);
  static PhiSpec exp_psi_log(Form psi);
  static PhiSpec conjugate(GaugeSpec gauge, PhiSpec inner);

  const Family& family() const noexcept { return family_; }
  std::string describe() const;

  /// Where the function came from when built by an adapter; empty otherwise.
  const std::string& provenance() const noexcept { return provenance_; }
  PhiSpec with_provenance(std::string p) const;

private:
  explicit PhiSpec(Family f) : family_(std::move(f)) {}
  Family family_;
  std::string provenance_;
};

struct IdentityGauge {};
struct PowerGauge { double q; };
struct AffinePlusGauge { double c; };
struct ExpOfFGauge { Form f; };

/// Candidate gauge G: (0, inf) -> (0, inf).
class GaugeSpec {
public:
  using Family = std::variant<IdentityGauge, PowerGauge, AffinePlusGauge, ExpOfFGauge, Tabulated>;

  static GaugeSpec identity();
  static GaugeSpec power(double q);
  static GaugeSpec affine_plus(double c);
  static GaugeSpec exp_of_f(Form f);
  static GaugeSpec tabulated(std::vector<std::pair<double, double>> points);

  const Family& family() const noexcept { return family_; }
  std::string describe() const;

  const std::string& provenance() const noexcept { return provenance_; }
  GaugeSpec with_provenance(std::string p) const;

private:
  explicit GaugeSpec(Family f) : family_(std::move(f)) {}
  Family family_;
  std::string provenance_;
};

/// What is known in closed form about a gauge family. Empty optionals mean
/// "not known"; certification then relies on sampling alone.
struct GaugeFacts {
  std::optional<double> infimum;
  /// Limit of G(a) as a -> 0+, +inf when it diverges.
  std::optional<double> limit_at_zero;
  std::optional<bool> vanishes_at_infinity;
  bool continuous_increasing = false;
  /// Lower end of the range of G, when G is a bijection onto (range_floor, inf).
  std::optional<double> range_floor;
};

GaugeFacts gauge_facts(const GaugeSpec& g);

// ---------------------------------------------------------------------------
// Evaluation

double phi_eval(const PhiSpec& phi, double t);
double phi_iterate(const PhiSpec& phi, double t, std::size_t n);
double gauge_eval(const GaugeSpec& g, double a);
/// G^-1(y); throws NotInvertible or DomainRestricted.
double gauge_inverse(const GaugeSpec& g, double y);

/// 10^(k / per_decade) for every integer k with lo <= value <= hi.
std::vector<double> log_grid(double lo, double hi, int per_decade);
std::vector<double> default_grid(int per_decade = 512);

// ---------------------------------------------------------------------------
// Comparison-function certification

struct PhiCertificate {
  Verdict member = Verdict::Inconclusive;
  /// Monotonicity failure: t1 < t2 but phi(t1) > phi(t2).
  std::optional<std::pair<double, double>> monotonicity_witness;
  /// Point whose iterates never decrease (phi(t) >= t along the orbit).
  std::optional<double> stagnation_witness;
  /// Grid point where phi left (0, inf).
  std::optional<double> positivity_witness;
  /// Grid point whose iterates did not reach tol within the budget.
  std::optional<double> unresolved_point;
  std::size_t max_steps = 0;
  std::string note;
};

PhiCertificate certify_phi(const PhiSpec& phi, std::span<const double> grid,
                           std::size_t budget = 1'000'000, double tol = 1e-9);

struct StrictDecreaseReport {
  bool holds = true;
  std::vector<double> witnesses;
};

StrictDecreaseReport check_phi_strict_decrease(const PhiSpec& phi, std::span<const double> grid);

// ---------------------------------------------------------------------------
// Gauge classes

struct GaugeSample {
  double alpha;
  double value;
};

struct ClassCertificate {
  Verdict in_g1 = Verdict::Inconclusive;
  Verdict in_g2 = Verdict::Inconclusive;
  double grid_min = 0.0;
  double grid_max = 0.0;
  double sampled_inf = 0.0;
  double sampled_sup = 0.0;
  std::optional<double> analytic_inf;
  /// Witness sequences; filled whenever they back a "no" verdict.
  std::vector<GaugeSample> g1_witness;
  std::vector<GaugeSample> g2_witness;
  std::string g2_reason;
};

ClassCertificate certify_gauge_class(const GaugeSpec& g, std::span<const double> grid,
                                     double tol = 1e-9);

enum class GaugeClass { G1, G2 };
std::string_view to_string(GaugeClass c) noexcept;

/// Dichotomy for strictly increasing gauges: positive infimum lands in G1,
/// zero infimum in G2. Throws NotStrictlyIncreasing with the offending pair.
GaugeClass classify_increasing_gauge(const GaugeSpec& g, std::span<const double> grid);

/// inf of G over the open region (r, inf).
double infimum_above(const GaugeSpec& g, double r, std::span<const double> grid);

double epsilon0(const GaugeSpec& g, std::span<const double> grid, double level = 1.0);

std::size_t n_epsilon(const GaugeSpec& g, const PhiSpec& phi, double s, double eps,
                      std::span<const double> grid, double level = 1.0,
                      std::size_t budget = 10'000);

// ---------------------------------------------------------------------------
// Built-in catalogs

std::vector<GaugeSpec> default_gauge_catalog();
std::vector<PhiSpec> default_phi_catalog();

}  // namespace gphi
