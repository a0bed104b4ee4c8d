#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "gphi/cli.hpp"
#include "gphi/harness.hpp"
#include "gphi/json_io.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace gphi;

namespace {

std::string temp_file(const std::string& name, const std::string& body) {
  const std::string path = "gphi_test_" + name;
  std::ofstream(path) << body;
  return path;
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

const char* kWorked = R"({"space": {"dist": [[0,1,2],[1,0,4],[2,4,0]]},
  "operator": {"map": [0,0,1]},
  "G": {"family": "identity"},
  "phi": {"family": "linear", "c": 0.5}})";

}  // namespace

TEST_CASE("space generator") {
  CHECK(generate_space(1, 1, 5).s_min() == 1);
  CHECK(generate_space(9, 6, 3).rows() == generate_space(9, 6, 3).rows());
  CHECK(generate_space(9, 6, 3).rows() != generate_space(10, 6, 3).rows());
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto s = generate_space(seed, 5, 2.5);
    const long double ref = oracle::max_ratio(s);
    CHECK(std::abs(static_cast<long double>(s.s_min()) - ref) <= 4 * ref * 0x1.0p-52L);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 5; ++j)
        if (i != j) CHECK((s(i, j) > 0 && s(i, j) <= 2.5));
  }
}

TEST_CASE("operator generator") {
  const auto one = generate_space(3, 1, 1);
  const auto& m = std::get<FiniteMap>(generate_operator(4, one, true).kind()).image;
  CHECK(m == std::vector<std::size_t>{0});
  const auto fs = generate_space(3, 6, 1);
  CHECK(std::get<FiniteMap>(generate_operator(8, fs, false).kind()).image ==
        std::get<FiniteMap>(generate_operator(8, fs, false).kind()).image);

  // The biased generator always yields an operator with a single attracting fixed point.
  for (std::uint64_t seed = 0; seed < 100; ++seed)
    CHECK(enumerate_fixed_points(fs, generate_operator(seed, fs, true)).size() == 1);
}

TEST_CASE("biased generator certifies more often than uniform maps") {
  const auto fs = generate_space(12345, 5, 4);
  const auto gauges = default_gauge_catalog();
  const auto phis = default_phi_catalog();
  auto certified = [&](const OperatorSpec& op) {
    for (const auto& g : gauges)
      for (const auto& phi : phis)
        if (certify_condition_G(fs, op, g, phi).verdict == ContractionVerdict::Certified) return true;
    return false;
  };
  int biased = 0, uniform = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    biased += certified(generate_operator(seed, fs, true));
    uniform += certified(generate_operator(seed, fs, false));
  }
  CHECK(biased > uniform);
}

TEST_CASE("fuzz configuration checks") {
  FuzzConfig c;
  c.trials = 0;
  CHECK(error_code([&] { fuzz(c); }) == ErrorCode::ConfigInvalid);
  c = {};
  c.max_points = 1;
  CHECK(error_code([&] { fuzz(c); }) == ErrorCode::ConfigInvalid);
  c = {};
  c.phi_catalog.clear();
  CHECK(error_code([&] { fuzz(c); }) == ErrorCode::ConfigInvalid);
  CHECK(error_code([] { break_mode_from_string("sometimes"); }) == ErrorCode::ConfigInvalid);
}

TEST_CASE("fuzz holds the theorem and is independent of thread count") {
  FuzzConfig c;
  c.seed = 7;
  c.trials = 200;
  c.threads = 1;
  const auto a = fuzz(c);
  c.threads = 4;
  const auto b = fuzz(c);
  CHECK(a.violations.empty());
  CHECK(a.certified_count == a.theorem_holds_count);
  CHECK(a.certified_count * 10 >= a.trials_run);
  CHECK(canonical_dump(to_json(a)) == canonical_dump(to_json(b)));
}

TEST_CASE("break modes never produce genuine violations") {
  FuzzConfig c;
  c.trials = 200;
  c.break_mode = BreakMode::DropContraction;
  const auto dc = fuzz(c);
  CHECK(dc.violations.empty());
  CHECK(dc.certified_count == 0);

  c.break_mode = BreakMode::DropPhi;
  const auto dp = fuzz(c);
  CHECK(dp.violations.empty());
  CHECK(dp.certified_count == 0);
  // Identity phi admits non-contracting maps, whose conclusions do fail.
  CHECK(dp.expected_violations > 0);
}

TEST_CASE("json round trips") {
  const Json inst = Json::parse(kWorked);
  const Instance i = instance_from_json(inst);
  CHECK(std::get<FiniteSpace>(i.space).size() == 3);
  CHECK(to_json(*i.phi) == Json::parse(R"({"family":"linear","c":0.5})"));

  for (const auto& g : default_gauge_catalog()) CHECK(to_json(gauge_from_json(to_json(g))) == to_json(g));
  for (const auto& p : default_phi_catalog()) CHECK(to_json(phi_from_json(to_json(p))) == to_json(p));
  const auto tab = Json::parse(R"({"family":"tabulated","points":[[0.5,0.1],[1.0,0.9]]})");
  CHECK(to_json(gauge_from_json(tab)) == tab);
  const auto conj = PhiSpec::conjugate(GaugeSpec::power(2), PhiSpec::linear(0.5));
  CHECK(to_json(phi_from_json(to_json(conj))) == to_json(conj));

  const auto sp = space_from_json(Json::parse(R"({"lo":0.0,"hi":1.0,"p":2.0})"));
  CHECK(std::get<AnalyticSpace>(sp).s() == 2);
  CHECK(error_code([] { space_from_json(Json::parse(R"({"dist":[[0,1,2],[1,0,4],[2,4,0]],"s":1.0})")); }) ==
        ErrorCode::ConstantTooSmall);
  CHECK(error_code([] { operator_from_json(Json::parse(R"({"map":[-1]})")); }) == ErrorCode::MalformedInput);
  CHECK(error_code([] { gauge_from_json(Json::parse(R"({"family":"weird"})")); }) == ErrorCode::MalformedInput);
}

TEST_CASE("canonical dump round-trips doubles exactly") {
  oracle::Gen gen(99);
  for (int i = 0; i < 1000; ++i) {
    const double x = std::ldexp(gen.unit(), static_cast<int>(gen.below(200)) - 100);
    const Json back = Json::parse(canonical_dump(Json{{"x", x}}));
    CHECK(back["x"].get<double>() == x);
    CHECK(back["x"].is_number_float());
  }
  CHECK(canonical_dump(Json(1.0)) == "1.0\n");
  CHECK(canonical_dump(Json(INFINITY)) == "\"inf\"\n");
}

TEST_CASE("cli certify exit codes") {
  const auto good = temp_file("worked.json", kWorked);
  CHECK(cli({"certify", good}).code == 0);

  Json bad = Json::parse(kWorked);
  bad["operator"]["map"] = {0, 1, 2};
  const auto viol = temp_file("identity.json", bad.dump());
  const auto r = cli({"certify", viol});
  CHECK(r.code == 2);
  CHECK(Json::parse(r.out)["condition_G"]["witness"]["x"] == 0);

  const auto ana = temp_file("table.json", R"({"space":{"lo":0,"hi":1,"p":1},
    "operator":{"table":[[0,0.1],[1,0.4]]},"G":{"family":"identity"},"phi":{"family":"linear","c":0.5}})");
  CHECK(cli({"certify", ana}).code == 3);

  const auto broken = temp_file("broken.json", "{\"space\": ");
  const auto m = cli({"certify", broken});
  CHECK(m.code == 1);
  CHECK_FALSE(m.err.empty());
  CHECK(cli({"certify", "does-not-exist.json"}).code == 1);
  CHECK(cli({"frobnicate"}).code == 1);
}

TEST_CASE("cli solve and report") {
  const auto f = temp_file("affine.json", R"({"space":{"lo":0,"hi":1,"p":1},
    "operator":{"affine":{"a":0.5,"b":0.25}},"G":{"family":"identity"},"phi":{"family":"linear","c":0.5}})");
  const auto r = cli({"solve", f, "--x0", "0"});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(std::abs(j["trace"]["fixed_point"].get<double>() - 0.5) <= 1e-10);
  CHECK(j["diagnostics"]["holds"] == true);

  const auto saved = temp_file("solve_out.json", r.out);
  const auto rep = cli({"report", saved});
  CHECK(rep.code == 0);
  CHECK(rep.out.find("tolerance-met") != std::string::npos);
  CHECK(rep.out.find("Cauchy bound") != std::string::npos);

  CHECK(cli({"solve", f, "--x0", "abc"}).code == 1);
  CHECK(cli({"solve", f, "--x0", "3"}).code == 1);
}

TEST_CASE("cli fuzz is byte-identical across runs") {
  const auto a = cli({"fuzz", "--seed", "42", "--trials", "100"});
  const auto b = cli({"fuzz", "--seed", "42", "--trials", "100", "--threads", "1"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(cli({"fuzz", "--trials", "0"}).code == 1);
  CHECK(cli({"fuzz", "--trials", "20", "--break", "drop-contraction"}).code == 0);
}
