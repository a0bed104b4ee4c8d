#include "gphi/harness.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "gphi/error.hpp"
#include "gphi/rng.hpp"

namespace gphi {

FiniteSpace generate_space(std::uint64_t seed, std::size_t n, double scale) {
  if (n < 1) throw Error(ErrorCode::InvalidParameter, "space needs at least one point");
  if (!(scale > 0.0)) throw Error(ErrorCode::InvalidParameter, "scale must be > 0");
  Rng rng(seed);
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) m[i][j] = m[j][i] = scale * rng.uniform_open_closed();
  return validate_finite_space(m, {std::max<std::size_t>(n, 256)});
}

OperatorSpec generate_operator(std::uint64_t seed, const FiniteSpace& space,
                               bool bias_contractive) {
  Rng rng(seed);
  const std::size_t n = space.size();
  std::vector<std::size_t> image(n);
  if (!bias_contractive) {
    for (auto& v : image) v = rng.below(n);
    return OperatorSpec::finite_map(std::move(image));
  }
  const std::size_t anchor = rng.below(n);
  std::vector<std::size_t> closer;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == anchor || rng.coin(0.5)) {
      image[i] = anchor;
      continue;
    }
    closer.clear();
    for (std::size_t j = 0; j < n; ++j)
      if (space(j, anchor) < space(i, anchor)) closer.push_back(j);
    image[i] = closer[rng.below(closer.size())];
  }
  return OperatorSpec::finite_map(std::move(image));
}

std::string_view to_string(BreakMode m) noexcept {
  switch (m) {
    case BreakMode::None: return "none";
    case BreakMode::DropContraction: return "drop-contraction";
    case BreakMode::DropPhi: return "drop-phi";
  }
  return "none";
}

BreakMode break_mode_from_string(std::string_view s) {
  if (s == "none") return BreakMode::None;
  if (s == "drop-contraction") return BreakMode::DropContraction;
  if (s == "drop-phi") return BreakMode::DropPhi;
  throw Error(ErrorCode::ConfigInvalid, "unknown break mode \"" + std::string(s) + "\"");
}

namespace {

struct Catalog {
  std::vector<GaugeSpec> gauges;
  std::vector<ClassCertificate> classes;
  std::vector<PhiSpec> phis;
  std::vector<bool> phi_member;
  std::vector<double> proof_grid;
};

struct TrialResult {
  bool certified = false;
  bool holds = false;
  bool g1 = false;
  bool g2 = false;
  bool broken_certified = false;
  bool expected_violation = false;
  std::map<std::string, LemmaTally> lemmas;
  std::optional<ViolationBundle> violation;
};

void tally(TrialResult& r, const std::string& lemma, bool ok) {
  auto& t = r.lemmas[lemma];
  ++t.checked;
  if (ok) ++t.passed;
}

struct Conclusion {
  bool holds = true;
  std::string reason;
  std::optional<PicardTrace> trace;

  void fail(std::string why, std::optional<PicardTrace> t = std::nullopt) {
    if (!holds) return;
    holds = false;
    reason = std::move(why);
    trace = std::move(t);
  }
};

/// Unique fixed point reached from every start; with `lemmas`, also the
/// class-specific proof steps.
Conclusion check_conclusion(const FiniteSpace& space, const OperatorSpec& op, const GaugeSpec& g,
                            const PhiSpec& phi, const ClassCertificate& cls,
                            const Catalog& cat, TrialResult* lemmas) {
  Conclusion c;
  const Space sp{space};
  const auto fixed = enumerate_fixed_points(space, op);
  if (lemmas) tally(*lemmas, "unique_fixed_point", fixed.size() == 1);
  if (fixed.size() != 1)
    c.fail("operator has " + std::to_string(fixed.size()) + " fixed points");

  std::vector<PicardTrace> traces;
  for (std::size_t x = 0; x < space.size(); ++x) {
    auto t = picard_iterate(sp, op, index_point(x));
    const bool reached = t.stop_reason == StopReason::ExactFixedPoint && fixed.size() == 1 &&
                         t.fixed_point && std::get<std::size_t>(*t.fixed_point) == fixed[0];
    if (lemmas) tally(*lemmas, "orbit_reaches_fixed_point", reached);
    if (!reached) c.fail("orbit from " + std::to_string(x) + " does not reach the fixed point", t);
    traces.push_back(std::move(t));
  }
  if (!lemmas) return c;

  if (cls.in_g1 == Verdict::Yes) {
    for (const auto& t : traces) {
      const bool ok = verify_g1_termination(t);
      tally(*lemmas, "g1_termination", ok);
      if (!ok) c.fail("G1 orbit did not terminate exactly", t);
    }
  }
  if (cls.in_g2 != Verdict::Yes) return c;

  ProofOptions opts;
  opts.grid = cat.proof_grid;
  const double s = space.s();
  double eps = 0.0;
  std::size_t n = 0;
  try {
    eps = epsilon0(g, opts.grid, opts.level) / 2.0;
    n = n_epsilon(g, phi, s, eps, opts.grid, opts.level, opts.n_budget);
    tally(*lemmas, "n_epsilon", true);
  } catch (const Error& e) {
    tally(*lemmas, "n_epsilon", false);
    c.fail(std::string("n_epsilon: ") + e.what());
    return c;
  }
  for (std::size_t x = 0; x < space.size(); ++x) {
    const Point x0 = index_point(x);
    try {
      m_epsilon(sp, op, x0, n, eps, opts.m_budget);
      tally(*lemmas, "m_epsilon", true);
    } catch (const Error& e) {
      tally(*lemmas, "m_epsilon", false);
      c.fail(std::string("m_epsilon: ") + e.what(), traces[x]);
      continue;
    }
    try {
      const auto d = verify_g2_lemmas(sp, op, x0, g, phi, eps, {}, opts);
      tally(*lemmas, "invariant_ball", d.ball.holds);
      tally(*lemmas, "step_chaining", d.chaining.holds);
      tally(*lemmas, "cauchy_bound", d.cauchy.holds);
      if (!d.holds()) c.fail("G2 lemma failed from start " + std::to_string(x), d.trace);
    } catch (const Error& e) {
      for (const char* l : {"invariant_ball", "step_chaining", "cauchy_bound"}) tally(*lemmas, l, false);
      c.fail(std::string("G2 pipeline: ") + e.what(), traces[x]);
    }
  }
  return c;
}

TrialResult run_trial(const FuzzConfig& cfg, const Catalog& cat, std::size_t trial) {
  TrialResult r;
  const std::uint64_t seed = cfg.seed + trial;
  Rng rng(seed);
  const std::size_t n = 2 + rng.below(cfg.max_points - 1);
  const double scale = cfg.min_scale + (cfg.max_scale - cfg.min_scale) * rng.uniform();
  const std::uint64_t space_seed = rng.bits(), op_seed = rng.bits();

  const FiniteSpace space = generate_space(space_seed, n, scale);
  const Space sp{space};
  OperatorSpec op = generate_operator(op_seed, space, cfg.break_mode != BreakMode::DropPhi);
  if (cfg.break_mode == BreakMode::DropContraction) {
    std::vector<std::size_t> id(n);
    for (std::size_t i = 0; i < n; ++i) id[i] = i;
    op = OperatorSpec::finite_map(std::move(id));
  }

  for (std::size_t gi = 0; gi < cat.gauges.size(); ++gi) {
    const auto& cls = cat.classes[gi];
    if (cls.in_g1 != Verdict::Yes && cls.in_g2 != Verdict::Yes) continue;
    for (std::size_t pi = 0; pi < cat.phis.size(); ++pi) {
      const bool phi_ok = cat.phi_member[pi];
      if (!phi_ok && cfg.break_mode != BreakMode::DropPhi) continue;
      const auto cert = certify_condition_G(sp, op, cat.gauges[gi], cat.phis[pi]);
      if (cert.verdict != ContractionVerdict::Certified) continue;

      const auto& g = cat.gauges[gi];
      const auto& phi = cat.phis[pi];
      if (!phi_ok) {
        // Dropped hypothesis: the conclusion may legitimately fail.
        r.broken_certified = true;
        r.expected_violation = !check_conclusion(space, op, g, phi, cls, cat, nullptr).holds;
        return r;
      }
      r.certified = true;
      r.g1 = cls.in_g1 == Verdict::Yes;
      r.g2 = cls.in_g2 == Verdict::Yes;
      if (cfg.break_mode == BreakMode::DropContraction) {
        r.violation = ViolationBundle{trial, seed, space, op, g, phi,
                                      "operator with several fixed points was certified",
                                      std::nullopt};
        return r;
      }
      auto c = check_conclusion(space, op, g, phi, cls, cat, &r);
      r.holds = c.holds;
      if (!c.holds)
        r.violation = ViolationBundle{trial, seed, space, op, g, phi, c.reason, std::move(c.trace)};
      return r;
    }
  }
  return r;
}

}  // namespace

FuzzReport fuzz(const FuzzConfig& config) {
  if (config.trials < 1) throw Error(ErrorCode::ConfigInvalid, "trials must be >= 1");
  if (config.max_points < 2) throw Error(ErrorCode::ConfigInvalid, "max_points must be >= 2");
  if (config.gauge_catalog.empty() || config.phi_catalog.empty())
    throw Error(ErrorCode::ConfigInvalid, "gauge and phi catalogs must be non-empty");
  if (!(config.min_scale > 0.0) || !(config.max_scale >= config.min_scale))
    throw Error(ErrorCode::ConfigInvalid, "scale range must satisfy 0 < min <= max");
  if (config.grid_density < 1) throw Error(ErrorCode::ConfigInvalid, "grid density must be >= 1");

  FuzzReport report;
  report.config = config;

  Catalog cat;
  cat.gauges = config.gauge_catalog;
  cat.proof_grid = default_grid(config.grid_density);
  for (const auto& g : cat.gauges) cat.classes.push_back(certify_gauge_class(g, cat.proof_grid));
  cat.phis = config.break_mode == BreakMode::DropPhi ? std::vector{PhiSpec::linear(1.0)}
                                                     : config.phi_catalog;
  const auto phi_grid = log_grid(1.0 / config.phi_span, config.phi_span, config.grid_density);
  for (const auto& phi : cat.phis) {
    auto cert = certify_phi(phi, phi_grid, config.phi_budget, config.phi_tol);
    cat.phi_member.push_back(cert.member == Verdict::Yes);
    report.phi_members.push_back(std::move(cert));
  }
  report.gauge_classes = cat.classes;

  std::vector<std::optional<TrialResult>> results(config.trials);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < config.trials;)
      results[i] = run_trial(config, cat, i);
  };
  unsigned threads = config.threads ? config.threads : std::thread::hardware_concurrency();
  threads = static_cast<unsigned>(std::clamp<std::size_t>(threads, 1, config.trials));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (auto& slot : results) {
    auto& r = *slot;
    ++report.trials_run;
    report.certified_count += r.certified;
    report.theorem_holds_count += r.holds;
    report.g1_instances += r.g1;
    report.g2_instances += r.g2;
    report.broken_certified += r.broken_certified;
    report.expected_violations += r.expected_violation;
    for (const auto& [name, t] : r.lemmas) {
      report.lemmas[name].checked += t.checked;
      report.lemmas[name].passed += t.passed;
    }
    if (r.violation) report.violations.push_back(std::move(*r.violation));
  }
  return report;
}

}  // namespace gphi
