#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace gphi {

/// A point of either space kind: an index into a finite space or a real
/// coordinate in an analytic interval.
using Point = std::variant<std::size_t, double>;

inline Point index_point(std::size_t i) { return Point{std::in_place_index<0>, i}; }
inline Point real_point(double x) { return Point{std::in_place_index<1>, x}; }

std::string to_string(const Point& p);

struct ValidationOptions {
  std::size_t max_points = 256;
};

/// Finite b-metric space given by an explicit distance matrix.
///
/// Instances only come out of validate_finite_space, so every value of this
/// type satisfies identity, symmetry and the relaxed triangle inequality with
/// its constant s().
class FiniteSpace {
public:
  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return dist_[i * n_ + j]; }

  /// Constant in force (>= s_min()).
  double s() const noexcept { return s_; }
  /// Smallest double s >= 1 with d(i,j) <= s * (d(i,k) + d(k,j)) on every triple, both
  /// in exact arithmetic and as evaluated in floating point.
  double s_min() const noexcept { return s_min_; }

  std::vector<std::vector<double>> rows() const;

  /// Same matrix with a larger declared constant; throws ConstantTooSmall below s_min().
  FiniteSpace with_constant(double s) const;

private:
  friend FiniteSpace validate_finite_space(const std::vector<std::vector<double>>&,
                                           const ValidationOptions&);
  FiniteSpace(std::size_t n, std::vector<double> dist, double s_min)
      : n_(n), dist_(std::move(dist)), s_min_(s_min), s_(s_min) {}

  std::size_t n_;
  std::vector<double> dist_;
  double s_min_;
  double s_;
};

FiniteSpace validate_finite_space(const std::vector<std::vector<double>>& matrix,
                                  const ValidationOptions& options = {});

/// Interval [lo, hi] with d(x, y) = |x - y|^p and s = 2^(p-1).
class AnalyticSpace {
public:
  static constexpr double kDefaultZeroTol = 1e-12;

  AnalyticSpace(double lo, double hi, double p, double zero_tol = kDefaultZeroTol);

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double p() const noexcept { return p_; }
  double s() const noexcept { return s_; }
  /// Two points count as equal when |x - y| <= zero_tol().
  double zero_tol() const noexcept { return zero_tol_; }

  bool contains(double x) const noexcept { return x >= lo_ && x <= hi_; }
  double distance(double x, double y) const;

private:
  double lo_, hi_, p_, s_, zero_tol_;
};

using Space = std::variant<FiniteSpace, AnalyticSpace>;

double b_constant(const Space& space);
bool contains(const Space& space, const Point& x);
double distance(const Space& space, const Point& x, const Point& y);

/// Zero convention: exact on finite spaces, |x - y| <= zero_tol on analytic ones.
bool same_point(const Space& space, const Point& x, const Point& y);

struct BoundReport {
  double lower = 0.0;
  double liminf_est = 0.0;
  double limsup_est = 0.0;
  double upper = 0.0;
  std::size_t window = 0;
  bool holds = false;
};

/// Last 25% of a sequence, at least 10 entries, never more than the sequence.
std::size_t default_tail_window(std::size_t length) noexcept;

BoundReport check_limit_bounds(const Space& space, std::span<const Point> seq,
                               const Point& x_star, const Point& y_star,
                               std::optional<std::size_t> tail = std::nullopt,
                               double tol = 1e-8);

/// Strict open-ball membership: d(center, candidate) < radius.
bool ball_membership(const Space& space, const Point& center, double radius,
                     const Point& candidate);

}  // namespace gphi
