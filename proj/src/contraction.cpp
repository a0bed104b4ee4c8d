#include "gphi/contraction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>

#include "gphi/error.hpp"
#include "gphi/rng.hpp"

namespace gphi {

namespace {

std::string fmt_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double table_map(const MonotoneTableMap& m, double x) {
  const auto& k = m.knots;
  if (x <= k.front().first) return k.front().second;
  if (x >= k.back().first) return k.back().second;
  auto hi = std::upper_bound(k.begin(), k.end(), x,
                             [](double v, const auto& p) { return v < p.first; });
  auto lo = std::prev(hi);
  const double w = (x - lo->first) / (hi->first - lo->first);
  return lo->second + w * (hi->second - lo->second);
}

}  // namespace

std::string_view to_string(ContractionVerdict v) noexcept {
  switch (v) {
    case ContractionVerdict::Certified: return "certified";
    case ContractionVerdict::Violated: return "violated";
    case ContractionVerdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

OperatorSpec OperatorSpec::finite_map(std::vector<std::size_t> image) {
  if (image.empty()) throw Error(ErrorCode::InvalidParameter, "finite map needs at least one entry");
  return OperatorSpec(FiniteMap{std::move(image)});
}

OperatorSpec OperatorSpec::affine(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b))
    throw Error(ErrorCode::InvalidParameter, "affine coefficients must be finite");
  return OperatorSpec(AffineMap{a, b});
}

OperatorSpec OperatorSpec::monotone_table(std::vector<std::pair<double, double>> knots) {
  if (knots.empty()) throw Error(ErrorCode::InvalidParameter, "table map needs knots");
  bool up = true, down = true;
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (!std::isfinite(knots[i].first) || !std::isfinite(knots[i].second))
      throw Error(ErrorCode::InvalidParameter, "knots must be finite");
    if (i == 0) continue;
    if (!(knots[i - 1].first < knots[i].first))
      throw Error(ErrorCode::InvalidParameter, "knot abscissae must be strictly increasing");
    up = up && knots[i - 1].second <= knots[i].second;
    down = down && knots[i - 1].second >= knots[i].second;
  }
  if (!up && !down) throw Error(ErrorCode::InvalidParameter, "table map must be monotone");
  return OperatorSpec(MonotoneTableMap{std::move(knots)});
}

std::string OperatorSpec::describe() const {
  if (const auto* m = std::get_if<FiniteMap>(&kind_)) {
    std::string s = "map[";
    for (std::size_t i = 0; i < m->image.size(); ++i)
      s += (i ? "," : "") + std::to_string(m->image[i]);
    return s + "]";
  }
  if (const auto* a = std::get_if<AffineMap>(&kind_))
    return "affine(" + fmt_num(a->a) + "*x+" + fmt_num(a->b) + ")";
  return "table(" + std::to_string(std::get<MonotoneTableMap>(kind_).knots.size()) + " knots)";
}

void validate_operator(const Space& space, const OperatorSpec& op) {
  if (const auto* m = std::get_if<FiniteMap>(&op.kind())) {
    const auto* fs = std::get_if<FiniteSpace>(&space);
    if (fs == nullptr) throw Error(ErrorCode::NotSelfMap, "finite map on an analytic space");
    if (m->image.size() != fs->size())
      throw Error(ErrorCode::NotSelfMap, "map has " + std::to_string(m->image.size()) +
                                             " entries for " + std::to_string(fs->size()) +
                                             " points");
    for (std::size_t i = 0; i < m->image.size(); ++i)
      if (m->image[i] >= fs->size())
        throw Error(ErrorCode::NotSelfMap, "T(" + std::to_string(i) + ") = " +
                                               std::to_string(m->image[i]) + " is not a point");
    return;
  }
  const auto* as = std::get_if<AnalyticSpace>(&space);
  if (as == nullptr) throw Error(ErrorCode::NotSelfMap, "analytic map on a finite space");
  std::vector<double> probes{as->lo(), as->hi()};
  if (const auto* t = std::get_if<MonotoneTableMap>(&op.kind()))
    for (const auto& [x, y] : t->knots)
      if (as->contains(x)) probes.push_back(x);
  for (double x : probes) {
    const double y = std::get<double>(apply(op, space, real_point(x)));
    if (!as->contains(y))
      throw Error(ErrorCode::NotSelfMap, "T(" + fmt_num(x) + ") = " + fmt_num(y) +
                                             " leaves [" + fmt_num(as->lo()) + ", " +
                                             fmt_num(as->hi()) + "]");
  }
}

Point apply(const OperatorSpec& op, const Space& space, const Point& x) {
  if (!contains(space, x))
    throw Error(ErrorCode::PointOutOfDomain, "point " + to_string(x) + " is not in the space");
  if (const auto* m = std::get_if<FiniteMap>(&op.kind())) {
    const std::size_t i = std::get<std::size_t>(x);
    if (i >= m->image.size()) throw Error(ErrorCode::NotSelfMap, "map shorter than the space");
    return index_point(m->image[i]);
  }
  if (!std::holds_alternative<double>(x))
    throw Error(ErrorCode::PointOutOfDomain, "analytic map applied to an index");
  const double v = std::get<double>(x);
  if (const auto* a = std::get_if<AffineMap>(&op.kind())) return real_point(a->a * v + a->b);
  return real_point(table_map(std::get<MonotoneTableMap>(op.kind()), v));
}

// ---------------------------------------------------------------------------

namespace {

struct Failure {
  double lhs;
  double rhs;
};

// Returns a failure when the pair violates the inequality; throws gphi::Error
// when it cannot be evaluated.
using PairCheck = std::function<std::optional<Failure>(double d_xy, double d_txty)>;

// R2 low-discrepancy sequence with a seeded Cranley-Patterson shift.
class PairSequence {
public:
  explicit PairSequence(std::uint64_t seed) {
    SplitMix64 sm(seed);
    shift_[0] = unit_interval(sm.next());
    shift_[1] = unit_interval(sm.next());
  }
  std::pair<double, double> operator[](std::size_t k) const {
    constexpr double g = 1.32471795724474602596;
    constexpr double a1 = 1.0 / g, a2 = 1.0 / (g * g);
    const double kk = static_cast<double>(k + 1);
    const double u = shift_[0] + kk * a1, v = shift_[1] + kk * a2;
    return {u - std::floor(u), v - std::floor(v)};
  }

private:
  double shift_[2];
};

ContractionCertificate run_pairs(const Space& space, const OperatorSpec& op, SamplingMode mode,
                                 const PairCheck& check, std::string condition) {
  validate_operator(space, op);
  ContractionCertificate cert;
  cert.condition = std::move(condition);

  std::vector<std::pair<Point, Point>> pairs;
  if (const auto* fs = std::get_if<FiniteSpace>(&space)) {
    if (mode.kind == SamplingMode::Kind::Random)
      cert.warning = "ModeUnsupported: random sampling requested on a finite space; checked "
                     "every pair instead";
    mode = SamplingMode::exhaustive();
    for (std::size_t i = 0; i < fs->size(); ++i)
      for (std::size_t j = i + 1; j < fs->size(); ++j) pairs.emplace_back(index_point(i), index_point(j));
  } else {
    if (mode.kind == SamplingMode::Kind::Exhaustive) {
      cert.warning = "ModeUnsupported: analytic spaces cannot be checked exhaustively; sampled "
                     "with seed 0";
      mode = SamplingMode::random(0);
    }
    const auto& as = std::get<AnalyticSpace>(space);
    const PairSequence seq(mode.seed);
    const double width = as.hi() - as.lo();
    for (std::size_t k = 0; k < mode.count; ++k) {
      const auto [u, v] = seq[k];
      pairs.emplace_back(real_point(std::min(as.hi(), as.lo() + u * width)),
                         real_point(std::min(as.hi(), as.lo() + v * width)));
    }
  }
  cert.mode = mode;

  for (const auto& [x, y] : pairs) {
    ++cert.checked_pairs;
    const Point tx = apply(op, space, x), ty = apply(op, space, y);
    if (same_point(space, tx, ty)) {
      ++cert.vacuous_pairs;
      continue;
    }
    const double d_xy = distance(space, x, y), d_t = distance(space, tx, ty);
    std::optional<Failure> fail;
    try {
      fail = check(d_xy, d_t);
    } catch (const Error& e) {
      if (cert.witness) return cert;
      cert.verdict = ContractionVerdict::Inconclusive;
      cert.note = std::string("could not evaluate pair (") + to_string(x) + ", " + to_string(y) +
                  "): " + e.what();
      return cert;
    }
    // Keep scanning so the pair count is complete; the witness is the first failure.
    if (fail && !cert.witness) {
      cert.verdict = ContractionVerdict::Violated;
      cert.witness = ContractionWitness{x, y, d_xy, d_t, fail->lhs, fail->rhs};
    }
  }
  if (cert.witness) return cert;
  if (mode.kind == SamplingMode::Kind::Exhaustive) {
    cert.verdict = ContractionVerdict::Certified;
  } else {
    cert.verdict = ContractionVerdict::Inconclusive;
    cert.sample_clean = true;
    cert.note = "no sampled pair failed";
  }
  return cert;
}

// Gauges of the form C * alpha^q, keyed by q.
std::optional<double> power_law_exponent(const GaugeSpec& g) {
  if (std::holds_alternative<IdentityGauge>(g.family())) return 1.0;
  if (const auto* p = std::get_if<PowerGauge>(&g.family())) return p->q;
  if (const auto* e = std::get_if<ExpOfFGauge>(&g.family());
      e && e->f.kind == Form::Kind::LogAffine && e->f.a > 0)
    return e->f.a;
  return std::nullopt;
}

// phi(t) = c * t.
std::optional<double> linear_factor(const PhiSpec& phi) {
  if (const auto* l = std::get_if<LinearPhi>(&phi.family())) return l->c;
  if (const auto* e = std::get_if<ExpPsiLogPhi>(&phi.family()); e && e->psi.a == 1.0)
    return std::exp(e->psi.b);
  return std::nullopt;
}

// An affine map scales |x - y|^p by |a|^p exactly, so for C*alpha^q gauges and
// linear phi the condition reduces to |a|^(p q) <= c on every pair at once.
std::optional<bool> affine_scaling_holds(const Space& space, const OperatorSpec& op,
                                         const GaugeSpec& g, const PhiSpec& phi) {
  const auto* as = std::get_if<AnalyticSpace>(&space);
  const auto* am = std::get_if<AffineMap>(&op.kind());
  const auto q = power_law_exponent(g);
  const auto c = linear_factor(phi);
  if (!as || !am || !q || !c) return std::nullopt;
  if (am->a == 0.0) return true;
  return std::pow(std::abs(am->a), as->p() * *q) <= *c;
}

std::string provenance_of(const GaugeSpec& g, const PhiSpec& phi) {
  std::string p;
  if (!g.provenance().empty()) p += "G: " + g.provenance();
  if (!phi.provenance().empty()) p += (p.empty() ? "" : "; ") + ("phi: " + phi.provenance());
  return p;
}

}  // namespace

ContractionCertificate certify_condition_G(const Space& space, const OperatorSpec& op,
                                           const GaugeSpec& g, const PhiSpec& phi,
                                           SamplingMode mode) {
  const PairCheck check = [&](double d_xy, double d_t) -> std::optional<Failure> {
    const double lhs = gauge_eval(g, d_t);
    const double rhs = phi_eval(phi, gauge_eval(g, d_xy));
    if (lhs <= rhs) return std::nullopt;
    return Failure{lhs, rhs};
  };
  auto cert = run_pairs(space, op, mode, check,
                        "G(d(Tx,Ty)) <= phi(G(d(x,y))), G=" + g.describe() +
                            ", phi=" + phi.describe());
  cert.provenance = provenance_of(g, phi);
  if (cert.sample_clean && affine_scaling_holds(space, op, g, phi).value_or(false)) {
    cert.verdict = ContractionVerdict::Certified;
    cert.note = "closed form: the affine map scales every distance by |a|^p";
  }
  return cert;
}

ContractionCertificate certify_f_inequality(const Space& space, const OperatorSpec& op,
                                            const Form& f, const Form& psi, SamplingMode mode) {
  const PairCheck check = [&](double d_xy, double d_t) -> std::optional<Failure> {
    const double lhs = f(d_t);
    const double rhs = psi(f(d_xy));
    if (lhs <= rhs) return std::nullopt;
    return Failure{lhs, rhs};
  };
  return run_pairs(space, op, mode, check,
                   "F(d(Tx,Ty)) <= psi(F(d(x,y))), F=" + f.describe() + ", psi=" + psi.describe());
}

ContractionCertificate certify_comparison_form(const Space& space, const OperatorSpec& op,
                                               const PhiSpec& psi_c, SamplingMode mode) {
  const PairCheck check = [&](double d_xy, double d_t) -> std::optional<Failure> {
    const double rhs = phi_eval(psi_c, d_xy);
    if (d_t <= rhs) return std::nullopt;
    return Failure{d_t, rhs};
  };
  auto cert = run_pairs(space, op, mode, check, "d(Tx,Ty) <= psi(d(x,y)), psi=" + psi_c.describe());
  cert.provenance = psi_c.provenance();
  return cert;
}

// ---------------------------------------------------------------------------

FContractionAdapter from_f_contraction(const Form& f, const Form& psi,
                                       std::span<const double> test_grid, std::size_t budget) {
  if (psi.kind != Form::Kind::Affine)
    throw Error(ErrorCode::InvalidParameter, "psi must be defined on all of R (affine form)");
  std::vector<double> grid(test_grid.begin(), test_grid.end());
  if (grid.empty()) grid = log_grid(1e-9, 1e9, 4);

  // psi acts on F-values, which range over R; probe it on ln of the grid.
  std::vector<double> reals;
  for (double t : grid) {
    if (!(t > 0.0)) throw Error(ErrorCode::NonpositiveArgument, "test grid must be positive");
    reals.push_back(std::log(t));
  }
  std::sort(reals.begin(), reals.end());
  for (std::size_t i = 0; i + 1 < reals.size(); ++i) {
    if (psi(reals[i]) > psi(reals[i + 1]))
      throw Error(ErrorCode::PsiNotNondecreasing,
                  "psi(" + fmt_num(reals[i]) + ") = " + fmt_num(psi(reals[i])) + " > psi(" +
                      fmt_num(reals[i + 1]) + ") = " + fmt_num(psi(reals[i + 1])));
  }

  constexpr double kUnderflow = -745.2;
  bool diverges = true;
  for (double u : reals) {
    double x = u;
    std::size_t k = 0;
    for (; k < budget && x >= kUnderflow; ++k) x = psi(x);
    if (x >= kUnderflow) {
      diverges = false;
      break;
    }
  }

  const std::string origin = "from_F_contraction(F=" + f.describe() + ", psi=" + psi.describe() + ")";
  return FContractionAdapter{GaugeSpec::exp_of_f(f).with_provenance("e^F, " + origin),
                             PhiSpec::exp_psi_log(psi).with_provenance("exp o psi o ln, " + origin),
                             diverges};
}

PhiSpec to_czerwik_form(const GaugeSpec& g, const PhiSpec& phi) {
  const GaugeFacts facts = gauge_facts(g);
  if (!facts.continuous_increasing || !facts.range_floor)
    throw Error(ErrorCode::NotInvertible, g.describe() + " has no continuous increasing inverse");
  if (*facts.range_floor > 0.0) {
    // G maps onto (floor, inf) and phi(t) < t, so phi(G(t)) drops below the
    // range of G as t -> 0+.
    std::string witness;
    for (double t = 1.0; t > 1e-300; t /= 2) {
      const double y = phi_eval(phi, gauge_eval(g, t));
      if (y <= *facts.range_floor) {
        witness = " (e.g. t = " + fmt_num(t) + ": phi(G(t)) = " + fmt_num(y) + ")";
        break;
      }
    }
    throw Error(ErrorCode::DomainRestricted, "G^-1 o phi o G leaves (0, inf) because G > " +
                                                 fmt_num(*facts.range_floor) + witness);
  }
  return PhiSpec::conjugate(g, phi).with_provenance("G^-1 o phi o G, G=" + g.describe() +
                                                     ", phi=" + phi.describe());
}

}  // namespace gphi
