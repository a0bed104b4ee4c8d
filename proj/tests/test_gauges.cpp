#include <doctest.h>

#include <cmath>
#include <vector>

#include "gphi/gauges.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace gphi;

TEST_CASE("phi evaluation") {
  CHECK(phi_eval(PhiSpec::linear(0.5), 4) == 2);
  CHECK(phi_eval(PhiSpec::hyperbolic(1), 1) == 0.5);
  CHECK(phi_eval(PhiSpec::tabulated({{1, 0.5}, {2, 0.9}}), 1.5) == 0.5);
  CHECK(phi_eval(PhiSpec::tabulated({{1, 0.5}, {2, 0.9}}), 0.1) == 0.5);
  CHECK(phi_eval(PhiSpec::tabulated({{1, 0.5}, {2, 0.9}}), 7) == 0.9);
  CHECK(error_code([] { phi_eval(PhiSpec::linear(0.5), 0); }) == ErrorCode::NonpositiveArgument);
  CHECK(error_code([] { phi_eval(PhiSpec::linear(0.5), -1); }) == ErrorCode::NonpositiveArgument);
}

TEST_CASE("phi iteration against explicit composition") {
  CHECK(phi_iterate(PhiSpec::linear(0.5), 1, 10) == std::ldexp(1.0, -10));
  const double hyp = oracle::compose([](double t) { return t / (1 + t); }, 1.0, 4);
  CHECK(hyp == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(phi_iterate(PhiSpec::hyperbolic(1), 1, 4) == doctest::Approx(hyp).epsilon(1e-15));
  for (const auto& phi : default_phi_catalog()) CHECK(phi_iterate(phi, 3, 0) == 3);

  oracle::Gen gen(5);
  for (int i = 0; i < 200; ++i) {
    const double a = gen.range(0.1, 3), t = gen.range(1e-3, 1e3);
    const std::size_t n = gen.below(60);
    const double ref = oracle::compose([a](double x) { return x / (1 + a * x); }, t, n);
    CHECK(phi_iterate(PhiSpec::hyperbolic(a), t, n) == doctest::Approx(ref).epsilon(1e-12));
    const double psi_b = -gen.range(0.01, 2);
    const double ref2 = oracle::compose([psi_b](double x) { return std::exp(std::log(x) + psi_b); }, t, n);
    CHECK(phi_iterate(PhiSpec::exp_psi_log(Form::affine(1, psi_b)), t, n) ==
          doctest::Approx(ref2).epsilon(1e-10));
  }
}

TEST_CASE("phi certification") {
  const std::vector<double> small = {0.1, 1, 10};
  const auto lin = certify_phi(PhiSpec::linear(0.5), small, 100, 1e-9);
  CHECK(lin.member == Verdict::Yes);
  CHECK(lin.max_steps <= 44);

  const std::vector<double> one = {1};
  CHECK(certify_phi(PhiSpec::hyperbolic(1), one, 1'000'000, 1e-5).member == Verdict::Yes);

  const auto diag = certify_phi(PhiSpec::tabulated({{0.5, 0.5}, {1, 1}, {2, 2}}), one);
  CHECK(diag.member != Verdict::Yes);
  CHECK(diag.stagnation_witness.has_value());

  const auto id = certify_phi(PhiSpec::linear(1), default_grid(16));
  CHECK(id.member == Verdict::No);
  CHECK(id.stagnation_witness.has_value());

  const auto dec = certify_phi(PhiSpec::tabulated({{1, 0.9}, {2, 0.1}}), small);
  CHECK(dec.member == Verdict::No);
  CHECK(dec.monotonicity_witness.has_value());

  CHECK(error_code([] { certify_phi(PhiSpec::linear(0.5), std::vector<double>{}); }) == ErrorCode::EmptyGrid);
}

TEST_CASE("property: catalog members decrease strictly on a dense grid") {
  const auto grid = log_grid(1e-6, 1e6, 512);
  CHECK(grid.size() == 12 * 512 + 1);
  for (const auto& phi : default_phi_catalog()) {
    const auto cert = certify_phi(phi, grid, 1'000'000, 1e-5);
    REQUIRE(cert.member == Verdict::Yes);
    const auto r = check_phi_strict_decrease(phi, grid);
    CHECK(r.holds);
    CHECK(r.witnesses.empty());
  }
  const auto id = check_phi_strict_decrease(PhiSpec::linear(1), std::vector<double>{1});
  CHECK_FALSE(id.holds);
  REQUIRE(id.witnesses.size() == 1);
  CHECK(id.witnesses[0] == 1);
}

TEST_CASE("gauge evaluation") {
  CHECK(gauge_eval(GaugeSpec::identity(), 3) == 3);
  CHECK(gauge_eval(GaugeSpec::affine_plus(1), 0.5) == 1.5);
  CHECK(gauge_eval(GaugeSpec::exp_of_f(Form::ln()), 2) == doctest::Approx(2).epsilon(1e-15));
  CHECK(gauge_eval(GaugeSpec::power(2), 3) == 9);
  CHECK(error_code([] { gauge_eval(GaugeSpec::identity(), 0); }) == ErrorCode::NonpositiveArgument);
}

TEST_CASE("gauge classes") {
  const auto grid = default_grid(64);

  const auto ap = certify_gauge_class(GaugeSpec::affine_plus(1), grid);
  CHECK(ap.in_g1 == Verdict::Yes);
  CHECK(ap.in_g2 == Verdict::No);
  REQUIRE_FALSE(ap.g2_witness.empty());
  // Witness drives alpha toward 0 while G stays near 1.
  CHECK(ap.g2_witness.back().alpha < 1e-6);
  CHECK(ap.g2_witness.back().value >= 1.0);

  const auto id = certify_gauge_class(GaugeSpec::identity(), grid);
  CHECK(id.in_g1 == Verdict::No);
  CHECK(id.in_g2 == Verdict::Yes);
  CHECK_FALSE(id.g1_witness.empty());

  CHECK(certify_gauge_class(GaugeSpec::power(2), grid).in_g2 == Verdict::Yes);
  CHECK(certify_gauge_class(GaugeSpec::power(0.5), grid).in_g2 == Verdict::Yes);
  CHECK(certify_gauge_class(GaugeSpec::exp_of_f(Form::ln()), grid).in_g2 == Verdict::Yes);
  const auto e = certify_gauge_class(GaugeSpec::exp_of_f(Form::affine(1, 0)), grid);
  CHECK(e.in_g1 == Verdict::Yes);
  CHECK(e.in_g2 == Verdict::No);

  // e^{-alpha} vanishes at infinity: the reverse direction of the iff fails.
  const auto dec = certify_gauge_class(GaugeSpec::exp_of_f(Form::affine(-1, 0)), grid);
  CHECK(dec.in_g2 == Verdict::No);

  CHECK(error_code([] { certify_gauge_class(GaugeSpec::identity(), std::vector<double>{}); }) ==
        ErrorCode::EmptyGrid);
}

TEST_CASE("property: a yes for G1 is never contradicted by its own samples") {
  const auto grid = default_grid(32);
  for (const auto& g : default_gauge_catalog()) {
    const auto c = certify_gauge_class(g, grid);
    if (c.in_g1 != Verdict::Yes) continue;
    REQUIRE(c.analytic_inf.has_value());
    CHECK(c.sampled_inf >= *c.analytic_inf);
    CHECK(*c.analytic_inf > 0);
  }
}

TEST_CASE("increasing gauge dichotomy") {
  const auto grid = default_grid(64);
  CHECK(classify_increasing_gauge(GaugeSpec::affine_plus(1), grid) == GaugeClass::G1);
  CHECK(classify_increasing_gauge(GaugeSpec::identity(), grid) == GaugeClass::G2);
  CHECK(classify_increasing_gauge(GaugeSpec::power(3), grid) == GaugeClass::G2);
  CHECK(error_code([&] { classify_increasing_gauge(GaugeSpec::exp_of_f(Form::affine(-1, 0)), grid); }) ==
        ErrorCode::NotStrictlyIncreasing);
}

TEST_CASE("epsilon0") {
  const auto grid = default_grid(512);
  CHECK(epsilon0(GaugeSpec::identity(), grid) == 1);
  CHECK(epsilon0(GaugeSpec::power(2), grid) == 1);
  CHECK(epsilon0(GaugeSpec::power(2), grid, 0.25) == 0.5);
  CHECK(epsilon0(GaugeSpec::power(0.5), grid, 0.5) == doctest::Approx(0.25));
  CHECK(error_code([&] { epsilon0(GaugeSpec::affine_plus(1), grid); }) == ErrorCode::NoValidEpsilon);
}

TEST_CASE("n_epsilon") {
  const auto grid = default_grid(64);
  const auto id = GaugeSpec::identity();
  CHECK(n_epsilon(id, PhiSpec::linear(0.5), 1, 1, grid) == 2);
  CHECK(n_epsilon(id, PhiSpec::linear(0.5), 2, 1, grid) == 3);
  CHECK(n_epsilon(id, PhiSpec::linear(0.1), 1, 1, grid) == 1);
  CHECK(error_code([&] { n_epsilon(id, PhiSpec::linear(1), 1, 1, grid, 1, 100); }) ==
        ErrorCode::BudgetExhausted);
}

TEST_CASE("property: shrinking eps never lowers n_epsilon") {
  const auto grid = default_grid(64);
  oracle::Gen gen(9);
  for (const auto& g : {GaugeSpec::identity(), GaugeSpec::power(2), GaugeSpec::power(0.5)}) {
    for (const auto& phi : default_phi_catalog()) {
      const double s = gen.range(1, 4);
      std::size_t prev = 0;
      bool exhausted = false;
      for (double eps = 0.9; eps > 1e-4; eps /= 3) {
        std::size_t n = 0;
        const auto err = error_code([&] { n = n_epsilon(g, phi, s, eps, grid); });
        if (exhausted) {
          CHECK(err == ErrorCode::BudgetExhausted);
          continue;
        }
        if (err) {
          CHECK(err == ErrorCode::BudgetExhausted);
          exhausted = true;
          continue;
        }
        CHECK(n >= prev);
        prev = n;
      }
    }
  }
}

TEST_CASE("log grid") {
  const auto g = log_grid(1e-2, 1e2, 1);
  REQUIRE(g.size() == 5);
  CHECK(g.front() == doctest::Approx(1e-2));
  CHECK(g[2] == 1);
  CHECK(g.back() == doctest::Approx(1e2));
}
