#include "gphi/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "gphi/error.hpp"
#include "gphi/harness.hpp"

namespace gphi {

namespace {

void dump_to(const Json& j, std::string& out, int depth) {
  const std::string pad(2 * static_cast<std::size_t>(depth + 1), ' ');
  const std::string close_pad(2 * static_cast<std::size_t>(depth), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(key).dump() + ": ";
        dump_to(value, out, depth + 1);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& v : j)
        if (v.is_structured()) flat = false;
      out += flat ? "[" : "[\n";
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += flat ? ", " : ",\n";
        first = false;
        if (!flat) out += pad;
        dump_to(v, out, depth + 1);
      }
      out += flat ? "]" : "\n" + close_pad + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      if (std::isnan(x)) {
        out += "\"nan\"";
      } else if (std::isinf(x)) {
        out += x > 0 ? "\"inf\"" : "\"-inf\"";
      } else {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        out += buf;
        // Keep a float recognisable as one after a round trip.
        if (std::string_view(buf).find_first_of(".eEn") == std::string_view::npos) out += ".0";
      }
      return;
    }
    default:
      out += j.dump();
  }
}

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorCode::MalformedInput, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) malformed(std::string("expected an object holding \"") + key + "\"");
  auto it = j.find(key);
  if (it == j.end()) malformed(std::string("missing field \"") + key + "\"");
  return *it;
}

double number(const Json& j, const char* what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
  }
  malformed(std::string(what) + " must be a number");
}

double number_field(const Json& j, const char* key) { return number(field(j, key), key); }

double number_or(const Json& j, const char* key, double fallback) {
  auto it = j.find(key);
  return it == j.end() ? fallback : number(*it, key);
}

std::size_t index(const Json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long long>() < 0)
    malformed(std::string(what) + " must be a non-negative integer");
  return j.get<std::size_t>();
}

std::vector<std::pair<double, double>> pairs(const Json& j, const char* what) {
  if (!j.is_array()) malformed(std::string(what) + " must be an array of [t, value] pairs");
  std::vector<std::pair<double, double>> out;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2) malformed(std::string(what) + " entries must be pairs");
    out.emplace_back(number(e[0], what), number(e[1], what));
  }
  return out;
}

const std::string& family(const Json& j) {
  const Json& f = field(j, "family");
  if (!f.is_string()) malformed("\"family\" must be a string");
  return f.get_ref<const std::string&>();
}

Json pairs_json(const std::vector<std::pair<double, double>>& ps) {
  Json a = Json::array();
  for (const auto& [t, v] : ps) a.push_back({t, v});
  return a;
}

template <class T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Json samples_json(const std::vector<GaugeSample>& s) {
  Json a = Json::array();
  for (const auto& x : s) a.push_back({{"alpha", x.alpha}, {"value", x.value}});
  return a;
}

}  // namespace

std::string canonical_dump(const Json& j) {
  std::string out;
  dump_to(j, out, 0);
  out += "\n";
  return out;
}

Space space_from_json(const Json& j) {
  if (!j.is_object()) malformed("space must be an object");
  if (j.contains("dist")) {
    const Json& d = j["dist"];
    if (!d.is_array()) malformed("\"dist\" must be an array of rows");
    std::vector<std::vector<double>> rows;
    for (const auto& row : d) {
      if (!row.is_array()) malformed("\"dist\" rows must be arrays");
      auto& r = rows.emplace_back();
      for (const auto& x : row) r.push_back(number(x, "distance entry"));
    }
    FiniteSpace fs = validate_finite_space(rows);
    if (j.contains("s") && !j["s"].is_null()) fs = fs.with_constant(number(j["s"], "s"));
    return fs;
  }
  return AnalyticSpace(number_field(j, "lo"), number_field(j, "hi"), number_field(j, "p"),
                       number_or(j, "zero_tol", AnalyticSpace::kDefaultZeroTol));
}

OperatorSpec operator_from_json(const Json& j) {
  if (!j.is_object()) malformed("operator must be an object");
  if (j.contains("map")) {
    const Json& m = j["map"];
    if (!m.is_array()) malformed("\"map\" must be an array of indices");
    std::vector<std::size_t> image;
    for (const auto& x : m) image.push_back(index(x, "map entry"));
    return OperatorSpec::finite_map(std::move(image));
  }
  if (j.contains("affine")) {
    const Json& a = j["affine"];
    return OperatorSpec::affine(number_field(a, "a"), number_field(a, "b"));
  }
  if (j.contains("table")) return OperatorSpec::monotone_table(pairs(j["table"], "table"));
  malformed("operator needs one of \"map\", \"affine\", \"table\"");
}

Form form_from_json(const Json& j) {
  if (j.is_string() && j.get_ref<const std::string&>() == "ln") return Form::ln();
  if (!j.is_object()) malformed("form must be \"ln\" or an object");
  const double a = number_or(j, "a", 1.0), b = number_or(j, "b", 0.0);
  const Json& k = field(j, "kind");
  if (k == "affine") return Form::affine(a, b);
  if (k == "log_affine") return Form::log_affine(a, b);
  malformed("form kind must be \"affine\" or \"log_affine\"");
}

GaugeSpec gauge_from_json(const Json& j) {
  const std::string& f = family(j);
  if (f == "identity") return GaugeSpec::identity();
  if (f == "power") return GaugeSpec::power(number_field(j, "q"));
  if (f == "affine_plus") return GaugeSpec::affine_plus(number_field(j, "c"));
  if (f == "exp_of_f") return GaugeSpec::exp_of_f(form_from_json(field(j, "F")));
  if (f == "tabulated") return GaugeSpec::tabulated(pairs(field(j, "points"), "points"));
  malformed("unknown gauge family \"" + f + "\"");
}

PhiSpec phi_from_json(const Json& j) {
  const std::string& f = family(j);
  if (f == "linear") return PhiSpec::linear(number_field(j, "c"));
  if (f == "hyperbolic") return PhiSpec::hyperbolic(number_field(j, "a"));
  if (f == "tabulated") return PhiSpec::tabulated(pairs(field(j, "points"), "points"));
  if (f == "exp_psi_log") return PhiSpec::exp_psi_log(form_from_json(field(j, "psi")));
  if (f == "conjugate")
    return PhiSpec::conjugate(gauge_from_json(field(j, "G")), phi_from_json(field(j, "inner")));
  malformed("unknown phi family \"" + f + "\"");
}

Point point_from_json(const Space& space, const Json& j) {
  if (std::holds_alternative<FiniteSpace>(space)) return index_point(index(j, "point"));
  return real_point(number(j, "point"));
}

Point point_from_text(const Space& space, const std::string& text) {
  char* end = nullptr;
  if (std::holds_alternative<FiniteSpace>(space)) {
    const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
    if (text.empty() || text[0] == '-' || *end != '\0') malformed("point must be an index: " + text);
    return index_point(static_cast<std::size_t>(v));
  }
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || *end != '\0') malformed("point must be a real number: " + text);
  return real_point(v);
}

Instance instance_from_json(const Json& j) {
  if (!j.is_object()) malformed("instance must be an object");
  Instance inst{space_from_json(field(j, "space")), operator_from_json(field(j, "operator")),
                std::nullopt, std::nullopt};
  validate_operator(inst.space, inst.op);
  if (j.contains("G")) inst.g = gauge_from_json(j["G"]);
  if (j.contains("phi")) inst.phi = phi_from_json(j["phi"]);
  return inst;
}

Json to_json(const Space& space) {
  if (const auto* fs = std::get_if<FiniteSpace>(&space))
    return {{"dist", fs->rows()}, {"s", fs->s()}, {"s_min", fs->s_min()}};
  const auto& as = std::get<AnalyticSpace>(space);
  return {{"lo", as.lo()}, {"hi", as.hi()}, {"p", as.p()}, {"s", as.s()},
          {"zero_tol", as.zero_tol()}};
}

Json to_json(const OperatorSpec& op) {
  return std::visit(
      [](const auto& k) -> Json {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, FiniteMap>)
          return {{"map", k.image}};
        else if constexpr (std::is_same_v<K, AffineMap>)
          return {{"affine", {{"a", k.a}, {"b", k.b}}}};
        else
          return {{"table", pairs_json(k.knots)}};
      },
      op.kind());
}

Json to_json(const Form& f) {
  return {{"kind", f.kind == Form::Kind::Affine ? "affine" : "log_affine"}, {"a", f.a}, {"b", f.b}};
}

Json to_json(const GaugeSpec& g) {
  Json j = std::visit(
      [](const auto& k) -> Json {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, IdentityGauge>)
          return {{"family", "identity"}};
        else if constexpr (std::is_same_v<K, PowerGauge>)
          return {{"family", "power"}, {"q", k.q}};
        else if constexpr (std::is_same_v<K, AffinePlusGauge>)
          return {{"family", "affine_plus"}, {"c", k.c}};
        else if constexpr (std::is_same_v<K, ExpOfFGauge>)
          return {{"family", "exp_of_f"}, {"F", to_json(k.f)}};
        else
          return {{"family", "tabulated"}, {"points", pairs_json(k.points)}};
      },
      g.family());
  if (!g.provenance().empty()) j["provenance"] = g.provenance();
  return j;
}

Json to_json(const PhiSpec& phi) {
  Json j = std::visit(
      [](const auto& k) -> Json {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, LinearPhi>)
          return {{"family", "linear"}, {"c", k.c}};
        else if constexpr (std::is_same_v<K, HyperbolicPhi>)
          return {{"family", "hyperbolic"}, {"a", k.a}};
        else if constexpr (std::is_same_v<K, Tabulated>)
          return {{"family", "tabulated"}, {"points", pairs_json(k.points)}};
        else if constexpr (std::is_same_v<K, ExpPsiLogPhi>)
          return {{"family", "exp_psi_log"}, {"psi", to_json(k.psi)}};
        else
          return {{"family", "conjugate"}, {"G", to_json(*k.gauge)}, {"inner", to_json(*k.inner)}};
      },
      phi.family());
  if (!phi.provenance().empty()) j["provenance"] = phi.provenance();
  return j;
}

Json to_json(const Point& p) {
  if (const auto* i = std::get_if<std::size_t>(&p)) return *i;
  return std::get<double>(p);
}

Json to_json(const ContractionCertificate& c) {
  Json j = {{"verdict", to_string(c.verdict)},
            {"mode", c.mode.kind == SamplingMode::Kind::Exhaustive ? "exhaustive" : "random"},
            {"checked_pairs", c.checked_pairs},
            {"vacuous_pairs", c.vacuous_pairs},
            {"sample_clean", c.sample_clean},
            {"condition", c.condition},
            {"witness", nullptr}};
  if (c.mode.kind == SamplingMode::Kind::Random) {
    j["seed"] = c.mode.seed;
    j["samples"] = c.mode.count;
  }
  if (c.witness) {
    const auto& w = *c.witness;
    j["witness"] = {{"x", to_json(w.x)},       {"y", to_json(w.y)},     {"d_xy", w.d_xy},
                    {"d_txty", w.d_txty},      {"lhs", w.lhs},          {"rhs", w.rhs}};
  }
  if (!c.provenance.empty()) j["provenance"] = c.provenance;
  if (!c.warning.empty()) j["warning"] = c.warning;
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

Json to_json(const PhiCertificate& c) {
  Json j = {{"member", to_string(c.member)},
            {"max_steps", c.max_steps},
            {"stagnation_witness", optional_json(c.stagnation_witness)},
            {"positivity_witness", optional_json(c.positivity_witness)},
            {"unresolved_point", optional_json(c.unresolved_point)},
            {"monotonicity_witness", nullptr}};
  if (c.monotonicity_witness)
    j["monotonicity_witness"] = {c.monotonicity_witness->first, c.monotonicity_witness->second};
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

Json to_json(const ClassCertificate& c) {
  Json j = {{"in_G1", to_string(c.in_g1)},
            {"in_G2", to_string(c.in_g2)},
            {"grid_min", c.grid_min},
            {"grid_max", c.grid_max},
            {"sampled_inf", c.sampled_inf},
            {"sampled_sup", c.sampled_sup},
            {"analytic_inf", optional_json(c.analytic_inf)},
            {"G1_witness", samples_json(c.g1_witness)},
            {"G2_witness", samples_json(c.g2_witness)}};
  if (!c.g2_reason.empty()) j["G2_reason"] = c.g2_reason;
  return j;
}

Json to_json(const PicardTrace& t) {
  Json orbit = Json::array();
  for (const auto& p : t.orbit) orbit.push_back(to_json(p));
  Json j = {{"x0", to_json(t.x0)},
            {"orbit", std::move(orbit)},
            {"step_dists", t.step_dists},
            {"stop_reason", to_string(t.stop_reason)},
            {"fixed_point", t.fixed_point ? to_json(*t.fixed_point) : Json(nullptr)},
            {"k_stop", t.k_stop},
            {"length", t.length()}};
  const bool compressed = t.length() != t.orbit.size();
  j["compressed"] = compressed;
  if (compressed) j["indices"] = t.indices;
  if (t.cycle_length) j["cycle_length"] = *t.cycle_length;
  return j;
}

Json to_json(const BallCheck& b) {
  return {{"holds", b.holds},
          {"checked", b.checked},
          {"witness", b.witness ? to_json(*b.witness) : Json(nullptr)}};
}

Json to_json(const StepChaining& s) {
  return {{"k0", s.k0},
          {"m0", s.m0},
          {"threshold", s.threshold},
          {"max_distance", s.max_distance},
          {"max_chained_bound", s.max_chained_bound},
          {"blocks_checked", s.blocks_checked},
          {"holds", s.holds}};
}

Json to_json(const CauchyDiagnostics& c) {
  return {{"eps", c.eps},
          {"n", c.n},
          {"m", c.m},
          {"m0", c.m0},
          {"m_bar", c.m_bar},
          {"bound", c.bound},
          {"max_observed", c.max_observed},
          {"pairs_checked", c.pairs_checked},
          {"holds", c.holds}};
}

Json to_json(const G2Diagnostics& d) {
  return {{"eps0", d.eps0},
          {"eps", d.eps},
          {"n", d.n},
          {"m", d.m},
          {"invariant_ball", to_json(d.ball)},
          {"step_chaining", to_json(d.chaining)},
          {"cauchy", to_json(d.cauchy)},
          {"holds", d.holds()},
          {"trace_length", d.trace.length()}};
}

Json to_json(const FuzzReport& r) {
  const auto& c = r.config;
  Json gauges = Json::array(), phis = Json::array();
  for (std::size_t i = 0; i < c.gauge_catalog.size(); ++i) {
    Json e = {{"G", to_json(c.gauge_catalog[i])}};
    if (i < r.gauge_classes.size()) e["class"] = to_json(r.gauge_classes[i]);
    gauges.push_back(std::move(e));
  }
  for (std::size_t i = 0; i < c.phi_catalog.size(); ++i) {
    Json e = {{"phi", to_json(c.phi_catalog[i])}};
    if (i < r.phi_members.size()) e["certificate"] = to_json(r.phi_members[i]);
    phis.push_back(std::move(e));
  }
  Json lemmas = Json::object();
  for (const auto& [name, t] : r.lemmas) lemmas[name] = {{"checked", t.checked}, {"passed", t.passed}};
  Json violations = Json::array();
  for (const auto& v : r.violations) {
    Json e = {{"trial", v.trial},         {"seed", v.seed},         {"space", to_json(Space{v.space})},
              {"operator", to_json(v.op)}, {"G", to_json(v.g)},       {"phi", to_json(v.phi)},
              {"reason", v.reason},        {"trace", nullptr}};
    if (v.trace) e["trace"] = to_json(*v.trace);
    violations.push_back(std::move(e));
  }
  return {{"config",
           {{"seed", c.seed},
            {"trials", c.trials},
            {"max_points", c.max_points},
            {"scale", {c.min_scale, c.max_scale}},
            {"break_mode", to_string(c.break_mode)},
            {"grid_density", c.grid_density},
            {"phi_span", c.phi_span},
            {"phi_tol", c.phi_tol},
            {"phi_budget", c.phi_budget}}},
          {"catalog", {{"gauges", std::move(gauges)}, {"phis", std::move(phis)}}},
          {"trials_run", r.trials_run},
          {"certified_count", r.certified_count},
          {"theorem_holds_count", r.theorem_holds_count},
          {"g1_instances", r.g1_instances},
          {"g2_instances", r.g2_instances},
          {"broken_certified", r.broken_certified},
          {"expected_violations", r.expected_violations},
          {"lemmas", std::move(lemmas)},
          {"violations", std::move(violations)}};
}

}  // namespace gphi
