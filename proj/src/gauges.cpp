#include "gphi/gauges.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "gphi/error.hpp"

namespace gphi {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string fmt_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void require_positive_arg(double t) {
  if (!(t > 0.0) || !std::isfinite(t))
    throw Error(ErrorCode::NonpositiveArgument, "argument " + fmt_num(t) + " is not in (0, inf)");
}

double require_positive_value(double v, const char* what) {
  if (!(v > 0.0))
    throw Error(ErrorCode::DomainRestricted, std::string(what) + " left (0, inf): " + fmt_num(v));
  return v;
}

void validate_table(const std::vector<std::pair<double, double>>& pts) {
  if (pts.empty()) throw Error(ErrorCode::InvalidParameter, "tabulated function needs breakpoints");
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto [t, v] = pts[i];
    if (!(t > 0.0) || !std::isfinite(t) || !(v > 0.0) || !std::isfinite(v))
      throw Error(ErrorCode::InvalidParameter, "breakpoints must be positive and finite");
    if (i > 0 && !(pts[i - 1].first < t))
      throw Error(ErrorCode::InvalidParameter, "breakpoints must be strictly increasing in t");
  }
}

void require_param(bool ok, const char* msg) {
  if (!ok) throw Error(ErrorCode::InvalidParameter, msg);
}

std::vector<double> sorted_grid(std::span<const double> grid) {
  if (grid.empty()) throw Error(ErrorCode::EmptyGrid, "grid has no points");
  std::vector<double> g(grid.begin(), grid.end());
  for (double t : g) require_positive_arg(t);
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

}  // namespace

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::string_view to_string(GaugeClass c) noexcept { return c == GaugeClass::G1 ? "G1" : "G2"; }

// ---------------------------------------------------------------------------

double Form::operator()(double t) const {
  if (kind == Kind::Affine) return a * t + b;
  require_positive_arg(t);
  return a * std::log(t) + b;
}

std::optional<double> Form::inverse(double y) const {
  if (a == 0.0) return std::nullopt;
  const double u = (y - b) / a;
  return kind == Kind::Affine ? u : std::exp(u);
}

std::string Form::describe() const {
  if (kind == Kind::LogAffine && a == 1.0 && b == 0.0) return "ln";
  const std::string var = kind == Kind::Affine ? "t" : "ln(t)";
  std::string out = a == 1.0 ? var : fmt_num(a) + "*" + var;
  if (b != 0.0) out += (b < 0 ? "-" : "+") + fmt_num(std::abs(b));
  return out;
}

double Tabulated::operator()(double t) const {
  auto it = std::upper_bound(points.begin(), points.end(), t,
                             [](double x, const auto& p) { return x < p.first; });
  if (it == points.begin()) return points.front().second;
  return std::prev(it)->second;
}

// ---------------------------------------------------------------------------

PhiSpec PhiSpec::linear(double c) {
  require_param(c > 0.0 && std::isfinite(c), "linear phi needs c > 0");
  return PhiSpec(LinearPhi{c});
}

PhiSpec PhiSpec::hyperbolic(double a) {
  require_param(a > 0.0 && std::isfinite(a), "hyperbolic phi needs a > 0");
  return PhiSpec(HyperbolicPhi{a});
}

PhiSpec PhiSpec::tabulated(std::vector<std::pair<double, double>> points) {
  validate_table(points);
  return PhiSpec(Tabulated{std::move(points)});
}

PhiSpec PhiSpec::exp_psi_log(Form psi) {
  require_param(psi.kind == Form::Kind::Affine, "psi must be defined on all of R (affine form)");
  require_param(std::isfinite(psi.a) && std::isfinite(psi.b), "psi coefficients must be finite");
  return PhiSpec(ExpPsiLogPhi{psi});
}

PhiSpec PhiSpec::conjugate(GaugeSpec gauge, PhiSpec inner) {
  return PhiSpec(ConjugatePhi{std::make_shared<const GaugeSpec>(std::move(gauge)),
                              std::make_shared<const PhiSpec>(std::move(inner))});
}

PhiSpec PhiSpec::with_provenance(std::string p) const {
  PhiSpec copy = *this;
  copy.provenance_ = std::move(p);
  return copy;
}

std::string PhiSpec::describe() const {
  return std::visit(
      overloaded{
          [](const LinearPhi& f) { return "linear(c=" + fmt_num(f.c) + ")"; },
          [](const HyperbolicPhi& f) { return "hyperbolic(a=" + fmt_num(f.a) + ")"; },
          [](const Tabulated& f) {
            return "tabulated(" + std::to_string(f.points.size()) + " breakpoints)";
          },
          [](const ExpPsiLogPhi& f) { return "exp_psi_log(psi=" + f.psi.describe() + ")"; },
          [](const ConjugatePhi& f) {
            return "conjugate(G=" + f.gauge->describe() + ", phi=" + f.inner->describe() + ")";
          },
      },
      family_);
}

GaugeSpec GaugeSpec::identity() { return GaugeSpec(IdentityGauge{}); }

GaugeSpec GaugeSpec::power(double q) {
  require_param(q > 0.0 && std::isfinite(q), "power gauge needs q > 0");
  return GaugeSpec(PowerGauge{q});
}

GaugeSpec GaugeSpec::affine_plus(double c) {
  require_param(c > 0.0 && std::isfinite(c), "affine_plus gauge needs c > 0");
  return GaugeSpec(AffinePlusGauge{c});
}

GaugeSpec GaugeSpec::exp_of_f(Form f) {
  require_param(std::isfinite(f.a) && std::isfinite(f.b), "F coefficients must be finite");
  return GaugeSpec(ExpOfFGauge{f});
}

GaugeSpec GaugeSpec::tabulated(std::vector<std::pair<double, double>> points) {
  validate_table(points);
  return GaugeSpec(Tabulated{std::move(points)});
}

GaugeSpec GaugeSpec::with_provenance(std::string p) const {
  GaugeSpec copy = *this;
  copy.provenance_ = std::move(p);
  return copy;
}

std::string GaugeSpec::describe() const {
  return std::visit(
      overloaded{
          [](const IdentityGauge&) { return std::string("identity"); },
          [](const PowerGauge& g) { return "power(q=" + fmt_num(g.q) + ")"; },
          [](const AffinePlusGauge& g) { return "affine_plus(c=" + fmt_num(g.c) + ")"; },
          [](const ExpOfFGauge& g) { return "exp_of_f(F=" + g.f.describe() + ")"; },
          [](const Tabulated& f) {
            return "tabulated(" + std::to_string(f.points.size()) + " breakpoints)";
          },
      },
      family_);
}

GaugeFacts gauge_facts(const GaugeSpec& g) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  return std::visit(
      overloaded{
          [](const IdentityGauge&) { return GaugeFacts{0.0, 0.0, false, true, 0.0}; },
          [](const PowerGauge&) { return GaugeFacts{0.0, 0.0, false, true, 0.0}; },
          [](const AffinePlusGauge& a) { return GaugeFacts{a.c, a.c, false, true, a.c}; },
          [&](const ExpOfFGauge& e) {
            const Form& f = e.f;
            const double eb = std::exp(f.b);
            if (f.kind == Form::Kind::Affine) {
              // G = exp(a*alpha + b)
              if (f.a > 0) return GaugeFacts{eb, eb, false, true, eb};
              if (f.a == 0) return GaugeFacts{eb, eb, false, false, std::nullopt};
              return GaugeFacts{0.0, eb, true, false, std::nullopt};
            }
            // G = e^b * alpha^a
            if (f.a > 0) return GaugeFacts{0.0, 0.0, false, true, 0.0};
            if (f.a == 0) return GaugeFacts{eb, eb, false, false, std::nullopt};
            return GaugeFacts{0.0, kInf, true, false, std::nullopt};
          },
          [](const Tabulated& t) {
            double lo = kInf;
            for (const auto& [x, v] : t.points) lo = std::min(lo, v);
            return GaugeFacts{lo, t.points.front().second, false, false, std::nullopt};
          },
      },
      g.family());
}

// ---------------------------------------------------------------------------

double gauge_eval(const GaugeSpec& g, double a) {
  require_positive_arg(a);
  const double v = std::visit(overloaded{
                                  [&](const IdentityGauge&) { return a; },
                                  [&](const PowerGauge& p) { return std::pow(a, p.q); },
                                  [&](const AffinePlusGauge& p) { return p.c + a; },
                                  [&](const ExpOfFGauge& e) { return std::exp(e.f(a)); },
                                  [&](const Tabulated& t) { return t(a); },
                              },
                              g.family());
  return require_positive_value(v, "G");
}

double gauge_inverse(const GaugeSpec& g, double y) {
  auto positive = [](double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
      throw Error(ErrorCode::DomainRestricted, "G^-1 leaves (0, inf) at this value");
    return alpha;
  };
  return std::visit(
      overloaded{
          [&](const IdentityGauge&) { return positive(y); },
          [&](const PowerGauge& p) { return positive(std::pow(positive(y), 1.0 / p.q)); },
          [&](const AffinePlusGauge& p) { return positive(y - p.c); },
          [&](const ExpOfFGauge& e) -> double {
            if (!(e.f.a > 0.0)) throw Error(ErrorCode::NotInvertible, "F is not increasing");
            return positive(*e.f.inverse(std::log(positive(y))));
          },
          [&](const Tabulated&) -> double {
            throw Error(ErrorCode::NotInvertible, "tabulated gauges have no inverse");
          },
      },
      g.family());
}

double phi_eval(const PhiSpec& phi, double t) {
  require_positive_arg(t);
  const double v = std::visit(
      overloaded{
          [&](const LinearPhi& f) { return f.c * t; },
          [&](const HyperbolicPhi& f) { return t / (1.0 + f.a * t); },
          [&](const Tabulated& f) { return f(t); },
          [&](const ExpPsiLogPhi& f) { return std::exp(f.psi(std::log(t))); },
          [&](const ConjugatePhi& f) {
            return gauge_inverse(*f.gauge, phi_eval(*f.inner, gauge_eval(*f.gauge, t)));
          },
      },
      phi.family());
  return require_positive_value(v, "phi");
}

double phi_iterate(const PhiSpec& phi, double t, std::size_t n) {
  require_positive_arg(t);
  const auto dn = static_cast<double>(n);
  if (const auto* f = std::get_if<LinearPhi>(&phi.family())) return t * std::pow(f->c, dn);
  if (const auto* f = std::get_if<HyperbolicPhi>(&phi.family())) return t / (1.0 + dn * f->a * t);
  if (const auto* f = std::get_if<ExpPsiLogPhi>(&phi.family()); f && f->psi.a == 1.0)
    return std::exp(std::log(t) + dn * f->psi.b);
  if (const auto* f = std::get_if<ConjugatePhi>(&phi.family());
      f && gauge_facts(*f->gauge).continuous_increasing)
    return gauge_inverse(*f->gauge, phi_iterate(*f->inner, gauge_eval(*f->gauge, t), n));
  double x = t;
  for (std::size_t k = 0; k < n; ++k) x = phi_eval(phi, x);
  return x;
}

std::vector<double> log_grid(double lo, double hi, int per_decade) {
  require_param(lo > 0.0 && lo <= hi && per_decade > 0, "log_grid needs 0 < lo <= hi");
  const double pd = per_decade;
  const auto kmin = static_cast<long>(std::ceil(std::log10(lo) * pd - 1e-9));
  const auto kmax = static_cast<long>(std::floor(std::log10(hi) * pd + 1e-9));
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(std::max(0L, kmax - kmin + 1)));
  for (long k = kmin; k <= kmax; ++k) {
    const double v = (k % per_decade == 0) ? std::pow(10.0, static_cast<double>(k / per_decade))
                                           : std::pow(10.0, static_cast<double>(k) / pd);
    out.push_back(v);
  }
  return out;
}

std::vector<double> default_grid(int per_decade) { return log_grid(1e-9, 1e9, per_decade); }

// ---------------------------------------------------------------------------

namespace {

struct DescentOutcome {
  enum class Kind { Reached, Stagnant, Exhausted, LeftDomain };
  Kind kind;
  std::size_t steps = 0;
  double point = 0.0;
};

// Smallest count k with k * step_log <= target_log using exact integer search
// around the real-valued estimate.
std::size_t steps_for_log_decay(double log_t, double log_step, double log_tol) {
  // need log_t + k * log_step < log_tol with log_step < 0
  const double est = (log_tol - log_t) / log_step;
  auto k = static_cast<std::size_t>(std::max(0.0, std::floor(est)));
  while (k > 0 && log_t + static_cast<double>(k - 1) * log_step < log_tol) --k;
  while (!(log_t + static_cast<double>(k) * log_step < log_tol)) ++k;
  return k;
}

DescentOutcome descend_below(const PhiSpec& phi, double t, double tol, std::size_t budget) {
  using K = DescentOutcome::Kind;
  auto finish = [&](std::size_t k) {
    return k <= budget ? DescentOutcome{K::Reached, k, t} : DescentOutcome{K::Exhausted, k, t};
  };
  if (t < tol) return {K::Reached, 0, t};

  if (const auto* f = std::get_if<LinearPhi>(&phi.family())) {
    if (f->c >= 1.0) return {K::Stagnant, 0, t};
    const double est = std::ceil((std::log(tol) - std::log(t)) / std::log(f->c));
    if (est > static_cast<double>(budget) + 2) return {K::Exhausted, budget, t};
    auto k = static_cast<std::size_t>(std::max(0.0, est - 1));
    while (!(phi_iterate(phi, t, k) < tol)) ++k;
    while (k > 0 && phi_iterate(phi, t, k - 1) < tol) --k;
    return finish(k);
  }
  if (const auto* f = std::get_if<HyperbolicPhi>(&phi.family())) {
    // t / (1 + k a t) < tol  <=>  k > (1/tol - 1/t) / a
    const double est = std::floor((1.0 / tol - 1.0 / t) / f->a) + 1.0;
    if (est > static_cast<double>(budget) + 2) return {K::Exhausted, budget, t};
    auto k = static_cast<std::size_t>(std::max(0.0, est - 1));
    while (!(phi_iterate(phi, t, k) < tol)) ++k;
    while (k > 0 && phi_iterate(phi, t, k - 1) < tol) --k;
    return finish(k);
  }
  if (const auto* f = std::get_if<ExpPsiLogPhi>(&phi.family())) {
    const double a = f->psi.a, b = f->psi.b;
    if (a == 1.0) {
      if (b >= 0.0) return {K::Stagnant, 0, t};
      const double est = (std::log(tol) - std::log(t)) / b;
      if (est > static_cast<double>(budget) + 2) return {K::Exhausted, budget, t};
      return finish(steps_for_log_decay(std::log(t), b, std::log(tol)));
    }
    // psi has a finite fixed point u* = b / (1 - a); phi fixes e^{u*}.
    const double fixed = std::exp(b / (1.0 - a));
    if (fixed > 0.0 && std::isfinite(fixed)) return {K::Stagnant, 0, fixed};
  }

  if (const auto* f = std::get_if<ConjugatePhi>(&phi.family());
      f && gauge_facts(*f->gauge).continuous_increasing) {
    // G^-1 o phi^n o G, and G^-1 preserves order, so descend the inner phi.
    const double gt = gauge_eval(*f->gauge, t);
    double gtol;
    try {
      gtol = gauge_eval(*f->gauge, tol);
    } catch (const Error&) {
      gtol = 0.0;
    }
    if (gtol > 0.0) {
      DescentOutcome out = descend_below(*f->inner, gt, gtol, budget);
      const double inner_point = out.point;
      out.point = t;
      if (out.kind == K::Stagnant) {
        try {
          out.point = gauge_inverse(*f->gauge, inner_point);
        } catch (const Error&) {
        }
      }
      return out;
    }
  }

  double x = t;
  for (std::size_t k = 1; k <= budget; ++k) {
    double y;
    try {
      y = phi_eval(phi, x);
    } catch (const Error&) {
      return {K::LeftDomain, k, x};
    }
    if (y < tol) return {K::Reached, k, t};
    if (y >= x) return {K::Stagnant, k, x};
    x = y;
  }
  return {K::Exhausted, budget, t};
}

}  // namespace

PhiCertificate certify_phi(const PhiSpec& phi, std::span<const double> grid, std::size_t budget,
                           double tol) {
  const std::vector<double> g = sorted_grid(grid);
  require_param(budget >= 1, "budget must be >= 1");
  require_param(tol > 0.0, "tol must be > 0");

  PhiCertificate cert;
  std::vector<double> values(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    try {
      values[i] = phi_eval(phi, g[i]);
    } catch (const Error& e) {
      cert.member = Verdict::No;
      cert.positivity_witness = g[i];
      cert.note = e.what();
      return cert;
    }
  }
  for (std::size_t i = 0; i + 1 < g.size(); ++i) {
    if (values[i] > values[i + 1]) {
      cert.member = Verdict::No;
      cert.monotonicity_witness = std::pair{g[i], g[i + 1]};
      cert.note = "phi decreases between consecutive grid points";
      return cert;
    }
  }
  // Largest points first: they need the most steps, so budget trouble shows early.
  for (auto it = g.rbegin(); it != g.rend(); ++it) {
    const DescentOutcome out = descend_below(phi, *it, tol, budget);
    switch (out.kind) {
      case DescentOutcome::Kind::Reached:
        cert.max_steps = std::max(cert.max_steps, out.steps);
        break;
      case DescentOutcome::Kind::Stagnant:
        cert.member = Verdict::No;
        cert.stagnation_witness = out.point;
        cert.note = "iterates stop decreasing, so phi^n(t) does not tend to 0";
        return cert;
      case DescentOutcome::Kind::LeftDomain:
        cert.member = Verdict::No;
        cert.positivity_witness = out.point;
        cert.note = "an iterate left (0, inf)";
        return cert;
      case DescentOutcome::Kind::Exhausted:
        cert.member = Verdict::Inconclusive;
        cert.unresolved_point = *it;
        cert.note = "iterates did not reach tol within the budget";
        return cert;
    }
  }
  cert.member = Verdict::Yes;
  return cert;
}

StrictDecreaseReport check_phi_strict_decrease(const PhiSpec& phi, std::span<const double> grid) {
  StrictDecreaseReport r;
  for (double t : grid) {
    bool ok = false;
    try {
      ok = phi_eval(phi, t) < t;
    } catch (const Error&) {
      ok = false;
    }
    if (!ok) {
      r.holds = false;
      r.witnesses.push_back(t);
    }
  }
  return r;
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kPathLimit = 1e-300;

// G(a) for sampling; underflow to 0 is recorded as 0 rather than thrown.
double sample_gauge(const GaugeSpec& g, double a) {
  try {
    return gauge_eval(g, a);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DomainRestricted) throw;
    return 0.0;
  }
}

std::vector<GaugeSample> gauge_path(const GaugeSpec& g, bool toward_zero) {
  std::vector<GaugeSample> path;
  for (double a = 1.0; toward_zero ? a >= kPathLimit : a <= 1.0 / kPathLimit;
       a = toward_zero ? a / 2 : a * 2)
    path.push_back({a, sample_gauge(g, a)});
  return path;
}

std::optional<std::size_t> first_below(const std::vector<GaugeSample>& path, double level) {
  for (std::size_t i = 0; i < path.size(); ++i)
    if (path[i].value < level) return i;
  return std::nullopt;
}

double path_min(const std::vector<GaugeSample>& path) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& p : path) m = std::min(m, p.value);
  return m;
}

// Every tenth sample up to and including `last`.
std::vector<GaugeSample> thin(const std::vector<GaugeSample>& path, std::size_t last) {
  std::vector<GaugeSample> out;
  for (std::size_t i = 0; i < last; i += 10) out.push_back(path[i]);
  out.push_back(path[last]);
  return out;
}

}  // namespace

ClassCertificate certify_gauge_class(const GaugeSpec& g, std::span<const double> grid, double tol) {
  const std::vector<double> sg = sorted_grid(grid);
  require_param(tol > 0.0 && tol < 1.0, "tol must lie in (0, 1)");
  ClassCertificate cert;
  cert.grid_min = sg.front();
  cert.grid_max = sg.back();
  if (cert.grid_min > tol * (1 + 1e-9) || cert.grid_max < (1.0 / tol) * (1 - 1e-9))
    throw Error(ErrorCode::InvalidParameter, "grid must span [tol, 1/tol]");

  cert.sampled_inf = std::numeric_limits<double>::infinity();
  cert.sampled_sup = 0.0;
  for (double a : sg) {
    const double v = sample_gauge(g, a);
    cert.sampled_inf = std::min(cert.sampled_inf, v);
    cert.sampled_sup = std::max(cert.sampled_sup, v);
  }

  const GaugeFacts facts = gauge_facts(g);
  const auto zero_path = gauge_path(g, true);
  const auto inf_path = gauge_path(g, false);
  const auto zero_hit = first_below(zero_path, tol);
  const auto inf_hit = first_below(inf_path, tol);

  // G1: positive infimum.
  auto g1_no_witness = [&]() -> bool {
    if (zero_hit) {
      cert.g1_witness = thin(zero_path, *zero_hit);
      return true;
    }
    if (inf_hit) {
      cert.g1_witness = thin(inf_path, *inf_hit);
      return true;
    }
    return false;
  };
  if (facts.infimum && *facts.infimum > 0.0) {
    cert.analytic_inf = facts.infimum;
    const double floor = *facts.infimum * (1 - 1e-12);
    const bool consistent = cert.sampled_inf >= floor && path_min(zero_path) >= floor &&
                            path_min(inf_path) >= floor;
    cert.in_g1 = consistent ? Verdict::Yes : Verdict::Inconclusive;
  } else {
    if (facts.infimum) cert.analytic_inf = facts.infimum;
    cert.in_g1 = g1_no_witness() ? Verdict::No : Verdict::Inconclusive;
  }

  // G2, direction "alpha -> 0 implies G -> 0" along the dyadic refinement.
  Verdict to_zero = Verdict::Inconclusive;
  if (facts.limit_at_zero && *facts.limit_at_zero > 0.0) {
    if (path_min(zero_path) >= tol) {
      to_zero = Verdict::No;
      cert.g2_witness = thin(zero_path, zero_path.size() - 1);
      cert.g2_reason = "alpha_n -> 0 while G(alpha_n) stays away from 0";
    }
  } else if (zero_hit) {
    to_zero = Verdict::Yes;
  }

  // G2, direction "G -> 0 implies alpha -> 0": no sequence bounded away from 0
  // may drive G to 0.
  Verdict from_zero = Verdict::Inconclusive;
  const bool vanishes = facts.vanishes_at_infinity.value_or(inf_hit.has_value());
  if (vanishes) {
    if (inf_hit) {
      from_zero = Verdict::No;
      if (to_zero != Verdict::No) {
        cert.g2_witness = thin(inf_path, *inf_hit);
        cert.g2_reason = "G(alpha_n) -> 0 while alpha_n -> inf";
      }
    }
  } else if (!inf_hit && cert.sampled_inf > 0.0) {
    from_zero = Verdict::Yes;
  }

  if (to_zero == Verdict::No || from_zero == Verdict::No)
    cert.in_g2 = Verdict::No;
  else if (to_zero == Verdict::Yes && from_zero == Verdict::Yes)
    cert.in_g2 = Verdict::Yes;
  return cert;
}

GaugeClass classify_increasing_gauge(const GaugeSpec& g, std::span<const double> grid) {
  const std::vector<double> sg = sorted_grid(grid);
  double prev = gauge_eval(g, sg.front());
  for (std::size_t i = 1; i < sg.size(); ++i) {
    const double cur = gauge_eval(g, sg[i]);
    if (!(prev < cur)) {
      throw Error(ErrorCode::NotStrictlyIncreasing,
                  "G(" + fmt_num(sg[i - 1]) + ") = " + fmt_num(prev) + " >= G(" + fmt_num(sg[i]) +
                      ") = " + fmt_num(cur));
    }
    prev = cur;
  }
  const GaugeFacts facts = gauge_facts(g);
  const double inf_estimate = facts.infimum ? *facts.infimum : path_min(gauge_path(g, true));
  return inf_estimate > 1e-12 ? GaugeClass::G1 : GaugeClass::G2;
}

double infimum_above(const GaugeSpec& g, double r, std::span<const double> grid) {
  require_positive_arg(r);
  const GaugeFacts facts = gauge_facts(g);
  if (facts.continuous_increasing) return gauge_eval(g, r);
  if (const auto* t = std::get_if<Tabulated>(&g.family())) {
    double m = (*t)(r);
    for (const auto& [x, v] : t->points)
      if (x > r) m = std::min(m, v);
    return m;
  }
  if (facts.vanishes_at_infinity.value_or(false)) return 0.0;
  double m = std::numeric_limits<double>::infinity();
  for (double a : sorted_grid(grid))
    if (a > r) m = std::min(m, gauge_eval(g, a));
  if (!std::isfinite(m)) throw Error(ErrorCode::InvalidParameter, "no grid point above r");
  return m;
}

double epsilon0(const GaugeSpec& g, std::span<const double> grid, double level) {
  require_param(level > 0.0, "level must be > 0");
  const GaugeFacts facts = gauge_facts(g);
  if (facts.continuous_increasing && facts.range_floor) {
    // sup_{alpha < eps} G = G(eps) for a continuous increasing bijection.
    if (level <= *facts.range_floor)
      throw Error(ErrorCode::NoValidEpsilon, "G stays above level " + fmt_num(level));
    return gauge_inverse(g, level);
  }
  const std::vector<double> sg = sorted_grid(grid);
  std::vector<double> vals(sg.size());
  for (std::size_t i = 0; i < sg.size(); ++i) vals[i] = gauge_eval(g, sg[i]);
  const bool positive_everywhere =
      *std::min_element(vals.begin(), vals.end()) > 0.0;
  std::optional<double> best;
  double running_sup = 0.0;
  for (std::size_t i = 0; i < sg.size(); ++i) {
    running_sup = std::max(running_sup, vals[i]);
    if (running_sup > level) break;
    if (i == 0 || positive_everywhere) best = sg[i];
  }
  if (!best) throw Error(ErrorCode::NoValidEpsilon, "no grid value keeps sup G <= level");
  return *best;
}

std::size_t n_epsilon(const GaugeSpec& g, const PhiSpec& phi, double s, double eps,
                      std::span<const double> grid, double level, std::size_t budget) {
  require_param(s >= 1.0, "s must be >= 1");
  require_param(eps > 0.0 && level > 0.0, "eps and level must be > 0");
  const double target = infimum_above(g, eps / (2.0 * s), grid);
  if (target > 0.0) {
    double x = level;
    for (std::size_t n = 1; n <= budget; ++n) {
      x = phi_eval(phi, x);
      if (target > x) return n;
    }
  }
  throw Error(ErrorCode::BudgetExhausted, "phi^n(level) stayed >= inf G over (eps/2s, inf) for " +
                                              std::to_string(budget) + " steps");
}

std::vector<GaugeSpec> default_gauge_catalog() {
  return {GaugeSpec::identity(), GaugeSpec::power(2.0), GaugeSpec::power(0.5),
          GaugeSpec::affine_plus(1.0), GaugeSpec::exp_of_f(Form::ln())};
}

std::vector<PhiSpec> default_phi_catalog() {
  return {PhiSpec::linear(0.5), PhiSpec::linear(0.9), PhiSpec::hyperbolic(1.0)};
}

}  // namespace gphi
