#pragma once

// Independent reference computations used by the tests. None of them call
// into the library's own algorithms.

#include <cmath>
#include <cstdint>
#include <cstring>
#include <functional>
#include <numeric>
#include <vector>

#include "gphi/spaces.hpp"

namespace oracle {

/// Exact fraction with positive denominator.
struct Frac {
  std::int64_t num = 0;
  std::int64_t den = 1;

  bool operator<(const Frac& o) const { return num * o.den < o.num * den; }
};

inline Frac reduce(Frac f) {
  const std::int64_t g = std::gcd(f.num, f.den);
  return g ? Frac{f.num / g, f.den / g} : f;
}

/// max d(i,j) / (d(i,k) + d(k,j)) over distinct triples in exact integer
/// arithmetic, clamped below at 1.
inline Frac rational_s_min(const std::vector<std::vector<std::int64_t>>& d) {
  Frac best{1, 1};
  const std::size_t n = d.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        if (i == j || j == k || i == k) continue;
        const Frac r{d[i][j], d[i][k] + d[k][j]};
        if (best < r) best = r;
      }
  return reduce(best);
}

/// Same scan in long double on a validated space.
inline long double max_ratio(const gphi::FiniteSpace& s) {
  long double best = 1.0L;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j)
      for (std::size_t k = 0; k < s.size(); ++k) {
        if (i == j || j == k || i == k) continue;
        const long double r = static_cast<long double>(s(i, j)) /
                              (static_cast<long double>(s(i, k)) + static_cast<long double>(s(k, j)));
        best = std::max(best, r);
      }
  return best;
}

/// n explicit compositions.
inline double compose(const std::function<double(double)>& f, double t, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) t = f(t);
  return t;
}

/// Distance between two doubles in units in the last place.
inline std::int64_t ulp_distance(double a, double b) {
  std::int64_t ia, ib;
  static_assert(sizeof(double) == sizeof(std::int64_t));
  std::memcpy(&ia, &a, sizeof a);
  std::memcpy(&ib, &b, sizeof b);
  return ia > ib ? ia - ib : ib - ia;
}

/// Tiny deterministic generator for property tests (xorshift64*).
struct Gen {
  std::uint64_t state;
  explicit Gen(std::uint64_t seed) : state(seed * 2654435761ULL + 0x9E3779B97F4A7C15ULL) {}
  std::uint64_t next() {
    state ^= state >> 12;
    state ^= state << 25;
    state ^= state >> 27;
    return state * 2685821657736338717ULL;
  }
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double range(double lo, double hi) { return lo + (hi - lo) * unit(); }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }
};

}  // namespace oracle
