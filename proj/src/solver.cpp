#include "gphi/solver.hpp"

#include <algorithm>
#include <cmath>

#include "gphi/error.hpp"
#include "gphi/rng.hpp"

namespace gphi {

std::string_view to_string(StopReason r) noexcept {
  switch (r) {
    case StopReason::ExactFixedPoint: return "exact-fixed-point";
    case StopReason::ToleranceMet: return "tolerance-met";
    case StopReason::BudgetExhausted: return "budget-exhausted";
  }
  return "budget-exhausted";
}

std::optional<Point> PicardTrace::at(std::size_t k) const {
  auto it = std::lower_bound(indices.begin(), indices.end(), k);
  if (it == indices.end() || *it != k) return std::nullopt;
  return orbit[static_cast<std::size_t>(it - indices.begin())];
}

std::optional<double> PicardTrace::step_at(std::size_t k) const {
  auto it = std::lower_bound(indices.begin(), indices.end(), k);
  if (it == indices.end() || *it != k) return std::nullopt;
  const auto i = static_cast<std::size_t>(it - indices.begin());
  if (i >= step_dists.size()) return std::nullopt;
  return step_dists[i];
}

namespace {

void compress(PicardTrace& t, const PicardOptions& opt) {
  const std::size_t len = t.orbit.size();
  if (len <= opt.record_cap || opt.record_cap <= opt.tail_keep) return;
  const std::size_t head = len - opt.tail_keep;
  const std::size_t head_slots = opt.record_cap - opt.tail_keep;
  const std::size_t stride = (head + head_slots - 1) / head_slots;
  PicardTrace out;
  out.x0 = t.x0;
  out.stop_reason = t.stop_reason;
  out.fixed_point = t.fixed_point;
  out.k_stop = t.k_stop;
  out.cycle_length = t.cycle_length;
  for (std::size_t i = 0; i < len; ++i) {
    if (i < head && i % stride != 0) continue;
    out.indices.push_back(t.indices[i]);
    out.orbit.push_back(t.orbit[i]);
    if (i < t.step_dists.size()) out.step_dists.push_back(t.step_dists[i]);
  }
  t = std::move(out);
}

}  // namespace

PicardTrace picard_iterate(const Space& space, const OperatorSpec& op, const Point& x0,
                           const PicardOptions& options) {
  if (options.max_iter < 1) throw Error(ErrorCode::InvalidParameter, "max_iter must be >= 1");
  validate_operator(space, op);
  if (!contains(space, x0))
    throw Error(ErrorCode::PointOutOfDomain, "start " + to_string(x0) + " is not in the space");

  PicardTrace t;
  t.x0 = x0;
  t.orbit.push_back(x0);
  t.indices.push_back(0);

  const auto* fs = std::get_if<FiniteSpace>(&space);
  std::vector<std::ptrdiff_t> first_seen;
  if (fs) {
    first_seen.assign(fs->size(), -1);
    first_seen[std::get<std::size_t>(x0)] = 0;
  }

  std::size_t small_steps = 0;
  Point x = x0;
  for (std::size_t k = 0; k < options.max_iter; ++k) {
    const Point y = apply(op, space, x);
    t.step_dists.push_back(distance(space, x, y));
    t.orbit.push_back(y);
    t.indices.push_back(k + 1);
    if (same_point(space, x, y)) {
      t.stop_reason = StopReason::ExactFixedPoint;
      t.k_stop = k;
      t.fixed_point = x;
      compress(t, options);
      return t;
    }
    if (fs) {
      auto& seen = first_seen[std::get<std::size_t>(y)];
      if (seen >= 0) {
        t.stop_reason = StopReason::BudgetExhausted;
        t.k_stop = k + 1;
        t.cycle_length = k + 1 - static_cast<std::size_t>(seen);
        compress(t, options);
        return t;
      }
      seen = static_cast<std::ptrdiff_t>(k + 1);
    }
    small_steps = t.step_dists.back() < options.tol ? small_steps + 1 : 0;
    if (small_steps >= options.confirm) {
      t.stop_reason = StopReason::ToleranceMet;
      t.k_stop = k + 1;
      t.fixed_point = y;
      compress(t, options);
      return t;
    }
    x = y;
  }
  t.stop_reason = StopReason::BudgetExhausted;
  t.k_stop = options.max_iter;
  compress(t, options);
  return t;
}

void extend_trace(const Space& space, const OperatorSpec& op, PicardTrace& trace,
                  std::size_t length) {
  if (trace.orbit.empty()) throw Error(ErrorCode::EmptySequence, "trace has no points");
  while (trace.length() < length) {
    const Point& x = trace.orbit.back();
    Point y = apply(op, space, x);
    trace.step_dists.push_back(distance(space, x, y));
    trace.indices.push_back(trace.indices.back() + 1);
    trace.orbit.push_back(std::move(y));
  }
}

std::vector<std::size_t> enumerate_fixed_points(const FiniteSpace& space, const OperatorSpec& op) {
  const auto* m = std::get_if<FiniteMap>(&op.kind());
  if (m == nullptr || m->image.size() != space.size())
    throw Error(ErrorCode::NotSelfMap, "need a finite map matching the space");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < m->image.size(); ++i)
    if (m->image[i] == i) out.push_back(i);
  return out;
}

bool verify_g1_termination(const PicardTrace& trace) {
  return trace.stop_reason == StopReason::ExactFixedPoint;
}

namespace {

Point apply_n(const OperatorSpec& op, const Space& space, Point x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x = apply(op, space, x);
  return x;
}

void require_block(std::size_t n, double eps) {
  if (n < 1) throw Error(ErrorCode::InvalidParameter, "block length n must be >= 1");
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidParameter, "eps must be > 0");
}

}  // namespace

std::size_t m_epsilon(const Space& space, const OperatorSpec& op, const Point& x0, std::size_t n,
                      double eps, std::size_t budget) {
  require_block(n, eps);
  const double target = eps / (2.0 * b_constant(space));
  Point block = apply_n(op, space, x0, n);  // x_{mn} for m = 1
  for (std::size_t m = 1; m <= budget; ++m) {
    Point next = apply_n(op, space, block, n);
    if (distance(space, next, block) < target) return m;
    block = std::move(next);
  }
  throw Error(ErrorCode::BudgetExhausted,
              "d(x_{(m+1)n}, x_{mn}) stayed >= eps/(2s) for " + std::to_string(budget) + " blocks");
}

BallCheck verify_invariant_ball(const Space& space, const OperatorSpec& op,
                                const PicardTrace& trace, double eps, std::size_t n,
                                std::size_t m, std::size_t samples) {
  require_block(n, eps);
  const auto center = trace.at(m * n);
  if (!center)
    throw Error(ErrorCode::OrbitTooShort, "trace lacks index mn = " + std::to_string(m * n));

  BallCheck r;
  auto check = [&](const Point& u) {
    if (!(distance(space, u, *center) < eps)) return;
    ++r.checked;
    const Point image = apply_n(op, space, u, n);
    if (!(distance(space, image, *center) < eps) && r.holds) {
      r.holds = false;
      r.witness = u;
    }
  };

  if (const auto* fs = std::get_if<FiniteSpace>(&space)) {
    for (std::size_t u = 0; u < fs->size(); ++u) check(index_point(u));
    return r;
  }
  const auto& as = std::get<AnalyticSpace>(space);
  const double c = std::get<double>(*center);
  const double radius = std::pow(eps, 1.0 / as.p());
  const double left = std::max(as.lo(), c - radius), right = std::min(as.hi(), c + radius);
  check(*center);
  for (std::size_t i = 0; i < samples; ++i) {
    const double u = left + (static_cast<double>(i) + 0.5) / static_cast<double>(samples) *
                                (right - left);
    check(real_point(std::clamp(u, as.lo(), as.hi())));
  }
  return r;
}

StepChaining verify_step_chaining(const Space& space, const PicardTrace& trace, std::size_t n,
                                  double eps) {
  require_block(n, eps);
  const double s = b_constant(space);
  StepChaining r;
  r.threshold = eps / (static_cast<double>(n) * std::pow(s, static_cast<double>(n)));

  if (trace.step_dists.empty()) throw Error(ErrorCode::TailNotSmall, "trace has no steps");
  std::size_t k0 = 0;
  for (std::size_t i = 0; i < trace.step_dists.size(); ++i)
    if (!(trace.step_dists[i] < r.threshold)) k0 = trace.indices[i] + 1;
  const std::size_t last_step = trace.indices[trace.step_dists.size() - 1];
  if (k0 > last_step)
    throw Error(ErrorCode::TailNotSmall, "last recorded step is still >= eps/(n s^n)");
  r.k0 = k0;
  r.m0 = (k0 + n) / n;

  for (std::size_t m = r.m0; m * n + n - 1 <= last_step; ++m) {
    const std::size_t base = m * n;
    const auto origin = trace.at(base);
    if (!origin) continue;
    bool recorded = true;
    double chained = 0.0;
    double weight = 1.0;
    std::vector<double> bounds(n), dists(n);
    for (std::size_t p = 0; p < n && recorded; ++p) {
      const auto step = trace.step_at(base + p);
      const auto point = trace.at(base + p);
      if (!step || !point) {
        recorded = false;
        break;
      }
      weight *= s;
      chained += weight * *step;  // sum_{i=0}^{p} s^{i+1} d(x_{mn+i}, x_{mn+i+1})
      bounds[p] = chained;
      dists[p] = distance(space, *origin, *point);
    }
    if (!recorded) continue;
    ++r.blocks_checked;
    for (std::size_t p = 0; p < n; ++p) {
      r.max_distance = std::max(r.max_distance, dists[p]);
      r.max_chained_bound = std::max(r.max_chained_bound, bounds[p]);
      const bool ok = dists[p] < eps && bounds[p] < eps && dists[p] <= bounds[p] * (1 + 1e-12);
      r.holds = r.holds && ok;
    }
  }
  return r;
}

namespace {

const std::vector<double>& grid_or_default(const ProofOptions& options) {
  static const std::vector<double> fallback = default_grid(512);
  return options.grid.empty() ? fallback : options.grid;
}

}  // namespace

CauchyDiagnostics verify_cauchy_bound(const Space& space, const OperatorSpec& op,
                                      const PicardTrace& trace, const GaugeSpec& g,
                                      const PhiSpec& phi, double eps,
                                      const ProofOptions& options) {
  const double s = b_constant(space);
  const auto& grid = grid_or_default(options);
  CauchyDiagnostics d;
  d.eps = eps;
  d.n = n_epsilon(g, phi, s, eps, grid, options.level, options.n_budget);
  d.m = m_epsilon(space, op, trace.x0, d.n, eps, options.m_budget);
  try {
    d.m0 = verify_step_chaining(space, trace, d.n, eps).m0;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::TailNotSmall) throw;
    throw Error(ErrorCode::OrbitTooShort, "trace ends before its steps fall below eps/(n s^n)");
  }
  d.m_bar = std::max(d.m, d.m0);
  d.bound = 4.0 * s * s * s * eps;

  const std::size_t start = d.m_bar * d.n;
  if (trace.length() <= start)
    throw Error(ErrorCode::OrbitTooShort, "trace ends before index m_bar * n = " +
                                              std::to_string(start));
  auto first = std::lower_bound(trace.indices.begin(), trace.indices.end(), start);
  const auto offset = static_cast<std::size_t>(first - trace.indices.begin());
  const std::size_t count = trace.orbit.size() - offset;
  auto point = [&](std::size_t i) -> const Point& { return trace.orbit[offset + i]; };

  const std::size_t all_pairs = count * (count - 1) / 2;
  if (all_pairs <= options.max_pairs) {
    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t j = i + 1; j < count; ++j) {
        d.max_observed = std::max(d.max_observed, distance(space, point(i), point(j)));
        ++d.pairs_checked;
      }
  } else {
    SplitMix64 pick(count);
    for (std::size_t t = 0; t < options.subsample_pairs; ++t) {
      const std::size_t i = pick.next() % count, j = pick.next() % count;
      d.max_observed = std::max(d.max_observed, distance(space, point(i), point(j)));
      ++d.pairs_checked;
    }
  }
  d.holds = d.max_observed <= d.bound;
  return d;
}

G2Diagnostics verify_g2_lemmas(const Space& space, const OperatorSpec& op, const Point& x0,
                               const GaugeSpec& g, const PhiSpec& phi, std::optional<double> eps,
                               const PicardOptions& picard, const ProofOptions& options,
                               std::size_t max_length) {
  const auto& grid = grid_or_default(options);
  const double s = b_constant(space);
  G2Diagnostics out;
  out.eps0 = epsilon0(g, grid, options.level);
  out.eps = eps.value_or(out.eps0 / 2.0);
  out.n = n_epsilon(g, phi, s, out.eps, grid, options.level, options.n_budget);
  out.m = m_epsilon(space, op, x0, out.n, out.eps, options.m_budget);

  auto grow = [&](std::size_t length) {
    if (length > max_length)
      throw Error(ErrorCode::OrbitTooShort, "lemmas need " + std::to_string(length) +
                                                " orbit points, cap is " +
                                                std::to_string(max_length));
    extend_trace(space, op, out.trace, length);
  };

  out.trace = picard_iterate(space, op, x0, picard);
  grow(std::max(out.trace.length(), (out.m + 1) * out.n + 1));
  out.ball = verify_invariant_ball(space, op, out.trace, out.eps, out.n, out.m);

  for (;;) {
    try {
      out.chaining = verify_step_chaining(space, out.trace, out.n, out.eps);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::TailNotSmall || out.trace.length() >= max_length) throw;
      grow(std::min(max_length, 2 * out.trace.length() + out.n));
      continue;
    }
    const std::size_t need = (std::max(out.m, out.chaining.m0) + 4) * out.n + 1;
    if (out.trace.length() >= need) break;
    grow(need);
  }
  ProofOptions with_grid = options;
  with_grid.grid = grid;
  out.cauchy = verify_cauchy_bound(space, op, out.trace, g, phi, out.eps, with_grid);
  return out;
}

}  // namespace gphi
