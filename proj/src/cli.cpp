#include "gphi/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "gphi/error.hpp"
#include "gphi/harness.hpp"
#include "gphi/json_io.hpp"

namespace gphi {

namespace {

constexpr int kExitCertified = 0;
constexpr int kExitMalformed = 1;
constexpr int kExitViolated = 2;
constexpr int kExitInconclusive = 3;

struct Globals {
  std::optional<double> tol;
  std::optional<std::size_t> budget;
  int grid_density = 512;
};

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MalformedInput, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::MalformedInput, path + ": " + e.what());
  }
}

std::vector<double> class_grid(const Globals& gl, double tol) {
  return log_grid(std::min(1e-9, tol), std::max(1e9, 1.0 / tol), gl.grid_density);
}

int certify(const Globals& gl, const std::string& path, std::uint64_t seed, std::size_t samples,
            std::ostream& out) {
  const Instance inst = instance_from_json(read_json(path));
  if (!inst.g || !inst.phi) throw Error(ErrorCode::MalformedInput, "certify needs \"G\" and \"phi\"");

  const double class_tol = gl.tol.value_or(1e-9);
  const auto cls = certify_gauge_class(*inst.g, class_grid(gl, class_tol), class_tol);
  const auto phi_grid = log_grid(1e-6, 1e6, gl.grid_density);
  const auto phi = certify_phi(*inst.phi, phi_grid, gl.budget.value_or(1'000'000), gl.tol.value_or(1e-5));
  const SamplingMode mode = std::holds_alternative<FiniteSpace>(inst.space)
                                ? SamplingMode::exhaustive()
                                : SamplingMode::random(seed, samples);
  const auto cond = certify_condition_G(inst.space, inst.op, *inst.g, *inst.phi, mode);

  const bool gauge_yes = cls.in_g1 == Verdict::Yes || cls.in_g2 == Verdict::Yes;
  const bool gauge_no = cls.in_g1 == Verdict::No && cls.in_g2 == Verdict::No;
  int code = kExitInconclusive;
  if (cond.verdict == ContractionVerdict::Violated || phi.member == Verdict::No || gauge_no)
    code = kExitViolated;
  else if (gauge_yes && phi.member == Verdict::Yes && cond.verdict == ContractionVerdict::Certified)
    code = kExitCertified;

  const char* verdict = code == kExitCertified ? "certified"
                        : code == kExitViolated ? "violated"
                                                : "inconclusive";
  Json j = {{"space", to_json(inst.space)}, {"operator", to_json(inst.op)},
            {"G", to_json(*inst.g)},        {"phi", to_json(*inst.phi)},
            {"gauge_class", to_json(cls)},  {"phi_certificate", to_json(phi)},
            {"condition_G", to_json(cond)}, {"verdict", verdict}};
  out << canonical_dump(j);
  return code;
}

int solve(const Globals& gl, const std::string& path, const std::string& x0_text,
          std::optional<double> eps, std::ostream& out) {
  const Instance inst = instance_from_json(read_json(path));
  const Point x0 = point_from_text(inst.space, x0_text);
  PicardOptions picard;
  picard.tol = gl.tol.value_or(picard.tol);
  picard.max_iter = gl.budget.value_or(picard.max_iter);
  const auto trace = picard_iterate(inst.space, inst.op, x0, picard);

  Json j = {{"trace", to_json(trace)}, {"diagnostics", nullptr}};
  if (!inst.g || !inst.phi) {
    j["diagnostics_skipped"] = "instance has no G or phi";
  } else {
    ProofOptions proof;
    proof.grid = default_grid(gl.grid_density);
    const auto cls = certify_gauge_class(*inst.g, proof.grid);
    j["gauge_class"] = to_json(cls);
    try {
      if (cls.in_g2 == Verdict::Yes) {
        j["diagnostics"] = to_json(
            verify_g2_lemmas(inst.space, inst.op, x0, *inst.g, *inst.phi, eps, picard, proof));
      } else if (cls.in_g1 == Verdict::Yes) {
        j["diagnostics"] = {{"g1_termination", verify_g1_termination(trace)}};
      } else {
        j["diagnostics_skipped"] = "gauge is not certified in G1 or G2";
      }
    } catch (const Error& e) {
      j["diagnostics_error"] = e.what();
    }
  }
  out << canonical_dump(j);
  return 0;
}

int run_fuzz(const Globals& gl, FuzzConfig cfg, std::ostream& out) {
  cfg.grid_density = gl.grid_density;
  if (gl.tol) cfg.phi_tol = *gl.tol;
  if (gl.budget) cfg.phi_budget = *gl.budget;
  const auto report = fuzz(cfg);
  out << canonical_dump(to_json(report));
  return report.violations.empty() ? 0 : kExitViolated;
}

std::string num(const Json& j) {
  if (j.is_null()) return "none";
  if (j.is_number_float()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", j.get<double>());
    return buf;
  }
  return j.dump();
}

void report_trace(const Json& t, std::ostream& out) {
  const Json& steps = t.at("step_dists");
  out << "start:        " << num(t.at("x0")) << "\n"
      << "stop reason:  " << t.at("stop_reason").get<std::string>() << " at k = " << num(t.at("k_stop"))
      << "\n"
      << "fixed point:  " << num(t.at("fixed_point")) << "\n"
      << "orbit length: " << num(t.at("length")) << " (" << t.at("orbit").size() << " recorded)\n";
  if (t.contains("cycle_length")) out << "cycle length: " << num(t["cycle_length"]) << "\n";
  if (!steps.empty()) out << "last step:    " << num(steps.back()) << "\n";
}

int report(const std::string& path, std::ostream& out) {
  const Json j = read_json(path);
  if (!j.is_object()) throw Error(ErrorCode::MalformedInput, "report expects a JSON object");
  try {
    if (j.contains("trials_run")) {
      out << "trials run:        " << num(j["trials_run"]) << "\n"
          << "certified:         " << num(j["certified_count"]) << "\n"
          << "theorem holds:     " << num(j["theorem_holds_count"]) << "\n"
          << "G1 / G2 instances: " << num(j["g1_instances"]) << " / " << num(j["g2_instances"]) << "\n"
          << "violations:        " << j["violations"].size() << "\n";
      for (const auto& [name, t] : j["lemmas"].items())
        out << "  " << name << ": " << num(t["passed"]) << "/" << num(t["checked"]) << "\n";
      for (const auto& v : j["violations"])
        out << "violation in trial " << num(v["trial"]) << ": " << v["reason"].get<std::string>() << "\n";
      return 0;
    }
    const Json& t = j.contains("trace") ? j["trace"] : j;
    report_trace(t, out);
    if (j.contains("diagnostics") && j["diagnostics"].is_object()) {
      const Json& d = j["diagnostics"];
      if (d.contains("cauchy")) {
        const Json& c = d["cauchy"];
        out << "eps0 = " << num(d["eps0"]) << ", eps = " << num(d["eps"]) << ", n = " << num(d["n"])
            << ", m = " << num(d["m"]) << ", m0 = " << num(c["m0"]) << "\n"
            << "invariant ball:    " << (d["invariant_ball"]["holds"].get<bool>() ? "holds" : "FAILS")
            << "\n"
            << "step chaining:     " << (d["step_chaining"]["holds"].get<bool>() ? "holds" : "FAILS")
            << "\n"
            << "Cauchy bound:      max " << num(c["max_observed"]) << " vs 4s^3 eps = "
            << num(c["bound"]) << (c["holds"].get<bool>() ? " (holds)" : " (FAILS)") << "\n";
      } else if (d.contains("g1_termination")) {
        out << "G1 termination:    " << (d["g1_termination"].get<bool>() ? "holds" : "FAILS") << "\n";
      }
    }
    if (j.contains("diagnostics_error"))
      out << "diagnostics error: " << j["diagnostics_error"].get<std::string>() << "\n";
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::MalformedInput, path + ": " + e.what());
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fixed-point certification for (G, phi)-contractions on b-metric spaces", "gphi"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals gl;
  app.add_option("--tol", gl.tol, "Tolerance (Picard stop for solve, phi descent target otherwise)");
  app.add_option("--budget", gl.budget, "Iteration budget (Picard for solve, phi descent otherwise)");
  app.add_option("--grid-density", gl.grid_density, "Grid points per decade")
      ->check(CLI::PositiveNumber);

  std::string path, x0;
  std::optional<double> eps;
  std::uint64_t seed = 0;
  std::size_t samples = 4096;
  FuzzConfig cfg;
  std::string break_mode = "none";

  auto* c = app.add_subcommand("certify", "Certify an instance file");
  c->add_option("instance", path, "Instance JSON")->required();
  c->add_option("--seed", seed, "Pair-sampling seed (analytic spaces)");
  c->add_option("--samples", samples, "Sampled pairs (analytic spaces)");

  auto* s = app.add_subcommand("solve", "Run Picard iteration and the proof diagnostics");
  s->add_option("instance", path, "Instance JSON")->required();
  s->add_option("--x0", x0, "Start point")->required();
  s->add_option("--eps", eps, "Lemma radius (default epsilon0 / 2)");

  auto* f = app.add_subcommand("fuzz", "Random-instance falsification run");
  f->add_option("--seed", cfg.seed, "Master seed");
  f->add_option("--trials", cfg.trials, "Number of trials");
  f->add_option("--break", break_mode, "none | drop-contraction | drop-phi");
  f->add_option("--max-points", cfg.max_points, "Largest generated space");
  f->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");

  auto* r = app.add_subcommand("report", "Summarise a trace or fuzz report");
  r->add_option("file", path, "solve or fuzz output")->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "gphi: " << e.what() << "\n";
    return kExitMalformed;
  }

  try {
    if (*c) return certify(gl, path, seed, samples, out);
    if (*s) return solve(gl, path, x0, eps, out);
    if (*f) {
      cfg.break_mode = break_mode_from_string(break_mode);
      return run_fuzz(gl, cfg, out);
    }
    return report(path, out);
  } catch (const std::exception& e) {
    err << "gphi: " << e.what() << "\n";
    return kExitMalformed;
  }
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace gphi
