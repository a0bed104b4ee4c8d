#include "gphi/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "gphi/error.hpp"

namespace gphi {

std::string to_string(const Point& p) {
  if (const auto* i = std::get_if<std::size_t>(&p)) return std::to_string(*i);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", std::get<double>(p));
  return buf;
}

std::vector<std::vector<double>> FiniteSpace::rows() const {
  std::vector<std::vector<double>> out(n_, std::vector<double>(n_));
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) out[i][j] = (*this)(i, j);
  return out;
}

FiniteSpace FiniteSpace::with_constant(double s) const {
  if (!std::isfinite(s) || s < s_min_) {
    throw Error(ErrorCode::ConstantTooSmall,
                "declared s = " + std::to_string(s) + " is below s_min = " +
                    std::to_string(s_min_));
  }
  FiniteSpace copy = *this;
  copy.s_ = s;
  return copy;
}

namespace {

std::string cell(std::size_t i, std::size_t j) {
  return "(" + std::to_string(i) + ", " + std::to_string(j) + ")";
}

// Error-free sum a + b = x + err.
void two_sum(double a, double b, double& x, double& err) {
  x = a + b;
  const double bv = x - a;
  err = (a - (x - bv)) + (b - bv);
}

// Sign test for s * a + s * b - d in exact arithmetic, via a nonoverlapping
// expansion of the five exact terms (products split with fma).
bool exact_covers(double s, double a, double b, double d) {
  const double pa = s * a, pb = s * b;
  const double terms[] = {pa, std::fma(s, a, -pa), pb, std::fma(s, b, -pb), -d};
  std::vector<double> e;
  for (double t : terms) {
    std::vector<double> h;
    double q = t;
    for (double c : e) {
      double x, err;
      two_sum(q, c, x, err);
      if (err != 0.0) h.push_back(err);
      q = x;
    }
    h.push_back(q);
    e = std::move(h);
  }
  // The most significant component carries the sign.
  for (auto it = e.rbegin(); it != e.rend(); ++it)
    if (*it != 0.0) return *it > 0.0;
  return true;
}

bool covers(double s, double a, double b, double d) {
  return d <= s * (a + b) && exact_covers(s, a, b, d);
}

// Smallest double s >= 1 with d_ij <= s * (d_ik + d_kj) on every triple of
// distinct indices, both exactly and as evaluated in floating point.
double minimal_constant(std::size_t n, const std::vector<double>& d) {
  auto at = [&](std::size_t i, std::size_t j) { return d[i * n + j]; };
  double s = 1.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        const double a = at(i, k), b = at(k, j), dij = at(i, j);
        if (covers(s, a, b, dij)) continue;
        // Both checks are monotone in s, so the per-triple minimum suffices.
        double t = std::max(s, dij / (a + b));
        while (t > s && covers(std::nextafter(t, 0.0), a, b, dij)) t = std::nextafter(t, 0.0);
        while (!covers(t, a, b, dij)) t = std::nextafter(t, std::numeric_limits<double>::infinity());
        s = t;
      }
    }
  return s;
}

}  // namespace

FiniteSpace validate_finite_space(const std::vector<std::vector<double>>& matrix,
                                  const ValidationOptions& options) {
  const std::size_t n = matrix.size();
  if (n == 0) throw Error(ErrorCode::NotSquare, "distance matrix is empty");
  if (n > options.max_points) {
    throw Error(ErrorCode::TooManyPoints, std::to_string(n) + " points exceed the cap of " +
                                              std::to_string(options.max_points));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (matrix[i].size() != n) {
      throw Error(ErrorCode::NotSquare, "row " + std::to_string(i) + " has " +
                                            std::to_string(matrix[i].size()) +
                                            " entries, expected " + std::to_string(n));
    }
  }
  std::vector<double> flat(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double v = matrix[i][j];
      if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteEntry, "entry " + cell(i, j));
      flat[i * n + j] = v;
    }
  for (std::size_t i = 0; i < n; ++i)
    if (flat[i * n + i] != 0.0)
      throw Error(ErrorCode::NonzeroDiagonal, "entry " + cell(i, i));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (flat[i * n + j] < 0.0) throw Error(ErrorCode::NegativeEntry, "entry " + cell(i, j));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (flat[i * n + j] != flat[j * n + i])
        throw Error(ErrorCode::AsymmetricMatrix, "entries " + cell(i, j) + " and " + cell(j, i));
      if (flat[i * n + j] == 0.0)
        throw Error(ErrorCode::ZeroOffDiagonal, "distinct points at " + cell(i, j));
    }
  const double s = minimal_constant(n, flat);
  return FiniteSpace(n, std::move(flat), s);
}

AnalyticSpace::AnalyticSpace(double lo, double hi, double p, double zero_tol)
    : lo_(lo), hi_(hi), p_(p), s_(std::exp2(p - 1.0)), zero_tol_(zero_tol) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
    throw Error(ErrorCode::InvalidInterval, "need finite lo < hi");
  if (!std::isfinite(p) || p < 1.0)
    throw Error(ErrorCode::InvalidParameter, "exponent p must be >= 1");
  if (!(zero_tol >= 0.0)) throw Error(ErrorCode::InvalidParameter, "zero_tol must be >= 0");
}

double AnalyticSpace::distance(double x, double y) const {
  if (!contains(x) || !contains(y))
    throw Error(ErrorCode::PointOutOfDomain, "point outside [lo, hi]");
  const double gap = std::abs(x - y);
  return p_ == 1.0 ? gap : std::pow(gap, p_);
}

double b_constant(const Space& space) {
  return std::visit([](const auto& sp) { return sp.s(); }, space);
}

bool contains(const Space& space, const Point& x) {
  if (const auto* fs = std::get_if<FiniteSpace>(&space)) {
    const auto* i = std::get_if<std::size_t>(&x);
    return i != nullptr && *i < fs->size();
  }
  const auto* v = std::get_if<double>(&x);
  return v != nullptr && std::get<AnalyticSpace>(space).contains(*v);
}

namespace {
void require_contains(const Space& space, const Point& x) {
  if (!contains(space, x))
    throw Error(ErrorCode::PointOutOfDomain, "point " + to_string(x) + " is not in the space");
}
}  // namespace

double distance(const Space& space, const Point& x, const Point& y) {
  require_contains(space, x);
  require_contains(space, y);
  if (const auto* fs = std::get_if<FiniteSpace>(&space))
    return (*fs)(std::get<std::size_t>(x), std::get<std::size_t>(y));
  return std::get<AnalyticSpace>(space).distance(std::get<double>(x), std::get<double>(y));
}

bool same_point(const Space& space, const Point& x, const Point& y) {
  require_contains(space, x);
  require_contains(space, y);
  if (std::holds_alternative<FiniteSpace>(space))
    return std::get<std::size_t>(x) == std::get<std::size_t>(y);
  const auto& as = std::get<AnalyticSpace>(space);
  return std::abs(std::get<double>(x) - std::get<double>(y)) <= as.zero_tol();
}

std::size_t default_tail_window(std::size_t length) noexcept {
  const std::size_t quarter = (length + 3) / 4;
  return std::min(length, std::max<std::size_t>(quarter, 10));
}

BoundReport check_limit_bounds(const Space& space, std::span<const Point> seq,
                               const Point& x_star, const Point& y_star,
                               std::optional<std::size_t> tail, double tol) {
  if (seq.empty()) throw Error(ErrorCode::EmptySequence, "sequence has no entries");
  const std::size_t window = tail.value_or(default_tail_window(seq.size()));
  if (window == 0) throw Error(ErrorCode::InvalidParameter, "tail window must be positive");
  if (window > seq.size()) {
    throw Error(ErrorCode::TailLongerThanSequence,
                "tail " + std::to_string(window) + " > length " + std::to_string(seq.size()));
  }
  const double s = b_constant(space);
  const double d_star = distance(space, x_star, y_star);

  BoundReport r;
  r.window = window;
  r.lower = d_star / s;
  r.upper = s * d_star;
  r.liminf_est = std::numeric_limits<double>::infinity();
  r.limsup_est = -std::numeric_limits<double>::infinity();
  for (const Point& x : seq.subspan(seq.size() - window)) {
    const double d = distance(space, x, y_star);
    r.liminf_est = std::min(r.liminf_est, d);
    r.limsup_est = std::max(r.limsup_est, d);
  }
  r.holds = r.lower <= r.liminf_est + tol && r.liminf_est <= r.limsup_est &&
            r.limsup_est <= r.upper + tol;
  return r;
}

bool ball_membership(const Space& space, const Point& center, double radius,
                     const Point& candidate) {
  if (!(radius > 0.0)) throw Error(ErrorCode::NonpositiveRadius, "radius must be > 0");
  return distance(space, center, candidate) < radius;
}

}  // namespace gphi
