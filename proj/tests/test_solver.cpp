#include <doctest.h>

#include <cmath>
#include <vector>

#include "gphi/solver.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace gphi;

namespace {

Space three() { return validate_finite_space({{0, 1, 2}, {1, 0, 4}, {2, 4, 0}}); }
Space line3() { return validate_finite_space({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}}); }

std::size_t idx(const Point& p) { return std::get<std::size_t>(p); }
double real(const Point& p) { return std::get<double>(p); }

}  // namespace

TEST_CASE("Picard iteration on the worked finite instance") {
  const auto t = picard_iterate(three(), OperatorSpec::finite_map({0, 0, 1}), index_point(2));
  REQUIRE(t.orbit.size() == 4);
  CHECK(idx(t.orbit[0]) == 2);
  CHECK(idx(t.orbit[1]) == 1);
  CHECK(idx(t.orbit[2]) == 0);
  CHECK(idx(t.orbit[3]) == 0);
  CHECK(t.stop_reason == StopReason::ExactFixedPoint);
  CHECK(t.k_stop == 2);
  REQUIRE(t.fixed_point);
  CHECK(idx(*t.fixed_point) == 0);
  CHECK(t.step_dists == std::vector<double>{4, 1, 0});
}

TEST_CASE("identity map stops immediately") {
  const auto t = picard_iterate(three(), OperatorSpec::finite_map({0, 1, 2}), index_point(1));
  CHECK(t.stop_reason == StopReason::ExactFixedPoint);
  CHECK(t.k_stop == 0);
  CHECK(idx(*t.fixed_point) == 1);
}

TEST_CASE("affine orbit follows its closed form") {
  const Space unit = AnalyticSpace(0, 1, 1);
  const auto t = picard_iterate(unit, OperatorSpec::affine(0.5, 0.25), real_point(0));
  CHECK(real(t.orbit[1]) == 0.25);
  CHECK(real(t.orbit[2]) == 0.375);
  CHECK(real(t.orbit[3]) == 0.4375);
  for (std::size_t k = 0; k < t.orbit.size(); ++k)
    CHECK(real(t.orbit[k]) == doctest::Approx((1 - std::ldexp(1.0, -static_cast<int>(k))) / 2).epsilon(1e-15));
  CHECK(t.stop_reason == StopReason::ToleranceMet);
  CHECK(t.k_stop <= 40);
  CHECK(std::abs(real(*t.fixed_point) - 0.5) <= 1e-10);
}

TEST_CASE("trace invariants") {
  oracle::Gen gen(61);
  for (int i = 0; i < 50; ++i) {
    const double a = gen.range(-0.95, 0.95);
    const double b = gen.range(std::max(0.0, -a), std::min(1.0, 1 - a));
    const Space sp = AnalyticSpace(0, 1, 1 + gen.below(3));
    const auto op = OperatorSpec::affine(a, b);
    const auto t = picard_iterate(sp, op, real_point(gen.unit()));
    REQUIRE(t.step_dists.size() + 1 == t.orbit.size());
    for (std::size_t k = 0; k + 1 < t.orbit.size(); ++k) {
      CHECK(real(t.orbit[k + 1]) == real(apply(op, sp, t.orbit[k])));
      CHECK(t.step_dists[k] == distance(sp, t.orbit[k], t.orbit[k + 1]));
    }
    const auto again = picard_iterate(sp, op, t.x0);
    CHECK(again.orbit == t.orbit);
  }
}

TEST_CASE("cycles are reported as budget exhaustion") {
  const auto t = picard_iterate(three(), OperatorSpec::finite_map({1, 0, 2}), index_point(0));
  CHECK(t.stop_reason == StopReason::BudgetExhausted);
  REQUIRE(t.cycle_length);
  CHECK(*t.cycle_length == 2);
  CHECK_FALSE(verify_g1_termination(t));
  CHECK(error_code([] { picard_iterate(three(), OperatorSpec::finite_map({0, 0, 1}), index_point(0), {0}); }) ==
        ErrorCode::InvalidParameter);
}

TEST_CASE("long orbits are compressed but keep the tail") {
  const Space unit = AnalyticSpace(0, 1, 1);
  PicardOptions opt;
  opt.max_iter = 5000;
  opt.tol = 0;
  opt.record_cap = 500;
  opt.tail_keep = 100;
  const auto t = picard_iterate(unit, OperatorSpec::affine(0.999, 0), real_point(1), opt);
  CHECK(t.length() == 5001);
  CHECK(t.orbit.size() <= 500);
  for (std::size_t k = 4901; k <= 5000; ++k) REQUIRE(t.at(k));
  CHECK(t.at(0));
  CHECK(real(*t.at(5000)) == doctest::Approx(std::pow(0.999, 5000)).epsilon(1e-9));
}

TEST_CASE("fixed point enumeration") {
  const FiniteSpace fs = std::get<FiniteSpace>(three());
  CHECK(enumerate_fixed_points(fs, OperatorSpec::finite_map({0, 0, 1})) == std::vector<std::size_t>{0});
  CHECK(enumerate_fixed_points(fs, OperatorSpec::finite_map({0, 1, 2})) == std::vector<std::size_t>{0, 1, 2});
  CHECK(enumerate_fixed_points(fs, OperatorSpec::finite_map({1, 0, 2})) == std::vector<std::size_t>{2});
}

TEST_CASE("G1 termination") {
  const auto constant = picard_iterate(three(), OperatorSpec::finite_map({2, 2, 2}), index_point(0));
  CHECK(verify_g1_termination(constant));
  CHECK(constant.k_stop <= 1);
}

TEST_CASE("m_epsilon") {
  const Space unit = AnalyticSpace(0, 1, 1);
  CHECK(m_epsilon(unit, OperatorSpec::affine(0.5, 0), real_point(1), 1, 1) == 1);
  CHECK(m_epsilon(three(), OperatorSpec::finite_map({1, 1, 1}), index_point(0), 3, 0.01) == 1);
  CHECK(m_epsilon(three(), OperatorSpec::finite_map({0, 1, 2}), index_point(2), 2, 0.01) == 1);
  // d(x_{m+1}, x_m) = 2^-(m+1) first drops below 0.01 / 2 at m = 7.
  CHECK(m_epsilon(unit, OperatorSpec::affine(0.5, 0), real_point(1), 1, 0.01) == 7);
  CHECK(error_code([&] { m_epsilon(three(), OperatorSpec::finite_map({1, 0, 2}), index_point(0), 1, 0.1, 50); }) ==
        ErrorCode::BudgetExhausted);
}

TEST_CASE("invariant ball") {
  const auto op = OperatorSpec::finite_map({0, 0, 1});
  const auto t = picard_iterate(three(), op, index_point(2));
  // eps above the diameter: the ball is the whole space.
  const auto big = verify_invariant_ball(three(), op, t, 10, 2, 1);
  CHECK(big.holds);
  CHECK(big.checked == 3);

  // Center 0 is fixed, but T sends 1 (inside the ball) to 2 (outside).
  const auto bad_op = OperatorSpec::finite_map({0, 2, 2});
  const auto bt = picard_iterate(line3(), bad_op, index_point(0));
  const auto bad = verify_invariant_ball(line3(), bad_op, bt, 1.5, 1, 1);
  CHECK_FALSE(bad.holds);
  REQUIRE(bad.witness);
  CHECK(idx(*bad.witness) == 1);

  CHECK(error_code([&] { verify_invariant_ball(three(), op, t, 1, 5, 1); }) == ErrorCode::OrbitTooShort);
}

TEST_CASE("step chaining") {
  const Space unit = AnalyticSpace(0, 1, 1);
  const auto op = OperatorSpec::affine(0.5, 0);
  const auto t = picard_iterate(unit, op, real_point(1));
  const auto r = verify_step_chaining(unit, t, 2, 0.1);
  CHECK(r.holds);
  CHECK(r.threshold == doctest::Approx(0.05));
  // Steps are 2^-(k+1); the last one >= 0.05 is k = 3, so k0 = 4 and m0 = ceil(5/2) = 3.
  CHECK(r.k0 == 4);
  CHECK(r.m0 == 3);
  CHECK(r.blocks_checked > 0);

  const auto constant = picard_iterate(three(), OperatorSpec::finite_map({1, 1, 1}), index_point(1));
  const auto c = verify_step_chaining(three(), constant, 3, 0.5);
  CHECK(c.m0 == 1);
  CHECK(c.holds);

  CHECK(verify_step_chaining(unit, t, 1, 0.3).holds);

  const auto cyc = picard_iterate(three(), OperatorSpec::finite_map({1, 0, 2}), index_point(0));
  CHECK(error_code([&] { verify_step_chaining(three(), cyc, 1, 0.1); }) == ErrorCode::TailNotSmall);
}

TEST_CASE("Cauchy bound") {
  SUBCASE("squared distance, s = 2") {
    const Space sq = AnalyticSpace(0, 1, 2);
    const auto op = OperatorSpec::affine(0.5, 0);
    auto t = picard_iterate(sq, op, real_point(1));
    extend_trace(sq, op, t, 200);
    const auto d = verify_cauchy_bound(sq, op, t, GaugeSpec::identity(), PhiSpec::linear(0.25), 0.5);
    CHECK(d.holds);
    CHECK(d.bound == 32 * 0.5);
    CHECK(d.n == 2);
    CHECK(d.m == 1);
    CHECK(d.m_bar == std::max(d.m, d.m0));
    CHECK(d.max_observed <= d.bound);
  }
  SUBCASE("Banach case") {
    const Space unit = AnalyticSpace(0, 1, 1);
    const auto op = OperatorSpec::affine(0.5, 0.25);
    const auto d = verify_g2_lemmas(unit, op, real_point(0), GaugeSpec::identity(), PhiSpec::linear(0.5));
    CHECK(d.eps0 == 1);
    CHECK(d.eps == 0.5);
    CHECK(d.cauchy.bound == 4 * 0.5);
    CHECK(d.holds());
  }
  SUBCASE("truncated trace") {
    const Space unit = AnalyticSpace(0, 1, 1);
    const auto op = OperatorSpec::affine(0.5, 0.25);
    PicardOptions opt;
    opt.max_iter = 3;
    const auto t = picard_iterate(unit, op, real_point(0), opt);
    CHECK(error_code([&] {
            verify_cauchy_bound(unit, op, t, GaugeSpec::identity(), PhiSpec::hyperbolic(1), 0.01);
          }) == ErrorCode::OrbitTooShort);
  }
}

TEST_CASE("property: proof pipeline holds on random contracting affine maps") {
  oracle::Gen gen(71);
  for (int i = 0; i < 60; ++i) {
    const double p = 1 + gen.below(3);
    const Space sp = AnalyticSpace(-1, 1, p);
    const double a = gen.range(0.1, 0.9) * (gen.below(2) ? 1 : -1);
    const double b = gen.range(-(1 - std::abs(a)), 1 - std::abs(a));
    const auto op = OperatorSpec::affine(a, b);
    // G = identity, phi = Linear(|a|^p) certifies the map exactly.
    const auto phi = PhiSpec::linear(std::min(0.99, std::pow(std::abs(a), p) * 1.01));
    const auto d = verify_g2_lemmas(sp, op, real_point(gen.range(-1, 1)), GaugeSpec::identity(), phi);
    CHECK(d.holds());
  }
}

TEST_CASE("property: converged orbits satisfy the limit bounds") {
  oracle::Gen gen(81);
  for (int i = 0; i < 30; ++i) {
    const double p = 1 + gen.below(3);
    const AnalyticSpace as(0, 1, p);
    const Space sp = as;
    const double a = gen.range(0.5, 0.95);
    const auto op = OperatorSpec::affine(a, gen.range(0, 1 - a));
    PicardOptions opt;
    opt.tol = std::pow(1e-12, p);
    const auto t = picard_iterate(sp, op, real_point(gen.unit()), opt);
    REQUIRE(t.stop_reason != StopReason::BudgetExhausted);
    for (int j = 0; j < 10; ++j) CHECK(check_limit_bounds(sp, t.orbit, *t.fixed_point, real_point(gen.unit())).holds);
  }
}
