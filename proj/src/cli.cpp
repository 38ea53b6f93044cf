#include "wsc/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <utility>

#include "CLI11.hpp"
#include "wsc/io.hpp"

namespace wsc::cli {

namespace fs = std::filesystem;
using io::Json;

const char* to_string(Command command) {
  switch (command) {
    case Command::build_convex: return "build-convex";
    case Command::counterexample: return "counterexample";
    case Command::verify: return "verify";
    case Command::extend: return "extend";
    case Command::demo_linf: return "demo-linf";
  }
  return "?";
}

Command parse_command(const std::string& text) {
  for (Command c : {Command::build_convex, Command::counterexample, Command::verify,
                    Command::extend, Command::demo_linf}) {
    if (text == to_string(c)) return c;
  }
  throw Error(ErrorKind::InvalidInput, "unknown command '" + text + "'");
}

namespace {

constexpr std::size_t kInterpSamplesPerPiece = 16;
constexpr std::size_t kScalarizeSamples = 100;
constexpr std::size_t kExtensionSamples = 50;

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::InvalidInput, what); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bad("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Json read_json(const std::string& path) {
  try {
    return Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    bad("'" + path + "' is not valid JSON: " + e.what());
  }
}

bool looks_like_file(const std::string& arg) {
  return arg.ends_with(".json") || fs::is_regular_file(arg);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// Artifacts are buffered and written together once every check has run.
class Artifacts {
 public:
  void add(std::string name, std::string content) {
    files_.emplace_back(std::move(name), std::move(content));
  }

  void write(const fs::path& dir, std::ostream& out) const {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) bad("cannot create output directory '" + dir.string() + "': " + ec.message());
    for (const auto& [name, content] : files_) {
      const fs::path path = dir / name;
      std::ofstream f(path, std::ios::binary | std::ios::trunc);
      if (!f) bad("cannot write '" + path.string() + "'");
      f << content;
      out << "wrote " << path.string() << "\n";
    }
  }

 private:
  std::vector<std::pair<std::string, std::string>> files_;
};

// Named pass/fail checks. A check that throws records the error and fails.
class Suite {
 public:
  template <class Fn>
  void run(const std::string& name, Fn fn) {
    Json detail;
    try {
      detail = fn();
    } catch (const std::exception& e) {
      detail = {{"passed", false}, {"error", e.what()}};
    }
    if (!detail.value("passed", false)) passed_ = false;
    checks_[name] = std::move(detail);
  }

  bool passed() const { return passed_; }
  const Json& checks() const { return checks_; }

  void summarize(std::ostream& out) const {
    for (const auto& [name, detail] : checks_.items()) {
      out << (detail.value("passed", false) ? "PASS " : "FAIL ") << name;
      if (detail.contains("error")) out << ": " << detail["error"].get<std::string>();
      out << "\n";
    }
  }

 private:
  Json checks_ = Json::object();
  bool passed_ = true;
};

template <class S>
std::optional<S> optional_scalar(const std::optional<std::string>& text) {
  if (!text) return std::nullopt;
  return parse_scalar<S>(*text);
}

std::optional<CaseKind> parse_case_choice(const std::string& text) {
  if (text == "auto") return std::nullopt;
  return parse_case_kind(text);
}

template <class S>
Json check_slopes(const std::vector<S>& knots, const std::vector<S>& values) {
  const SlopeCheck sc = check_slope_chain<S>(knots, values);
  Json out = {{"passed", sc.ok}, {"pairs", knots.size() < 2 ? 0 : knots.size() - 2}};
  out["first_violation"] = sc.first_violation ? Json(*sc.first_violation) : Json(nullptr);
  return out;
}

// g(t_k) = a_k at every knot plus the interval identity at interior points.
template <class S>
Json check_interp(const std::vector<S>& knots, const std::vector<S>& values) {
  const SupOfLines<S> g = build_sup_of_lines(knots, values);
  Json knot_mismatch = Json::array();
  for (std::size_t k = 0; k < knots.size(); ++k) {
    if (!scalar_equal(eval_g(g, knots[k]), values[k])) knot_mismatch.push_back(k + 1);
  }
  Json interval_mismatch = Json::array();
  std::size_t samples = 0;
  for (std::size_t p = 0; p < g.pieces.size(); ++p) {
    for (std::size_t s = 1; s <= kInterpSamplesPerPiece; ++s) {
      const S frac = ratio<S>(static_cast<std::int64_t>(s),
                              static_cast<std::int64_t>(kInterpSamplesPerPiece + 1));
      const S r = knots[p + 1] + frac * (knots[p] - knots[p + 1]);
      const S expected = g.pieces[p](r);
      ++samples;
      if (!scalar_equal(eval_g(g, r), expected) || !scalar_equal(eval_g_interval(g, r), expected)) {
        interval_mismatch.push_back({{"piece", p + 1}, {"sample", s}});
      }
    }
  }
  return {{"passed", knot_mismatch.empty() && interval_mismatch.empty()},
          {"knot_mismatches", knot_mismatch},
          {"interval_samples", samples},
          {"interval_mismatches", interval_mismatch}};
}

template <class S>
bool same_scalars(const std::vector<S>& a, const std::vector<S>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!scalar_equal(a[i], b[i])) return false;
  }
  return true;
}

template <class S>
std::vector<std::size_t> all_labels(const RayMapping<S>& map) {
  std::vector<std::size_t> ks(map.depth());
  for (std::size_t k = 0; k < ks.size(); ++k) ks[k] = k + 1;
  return ks;
}

// Default divergence floor: |F(t_k)/t_k| scale times the smallest pairwise
// gap among the selected family members.
template <class S>
S default_gap_floor(const RayMapping<S>& map) {
  const S factor = abs_value(S(map.node_coefficients.front() / map.knots().front()));
  std::optional<S> smallest;
  for (std::size_t i = 0; i < map.members.size(); ++i) {
    for (std::size_t j = i + 1; j < map.members.size(); ++j) {
      const S gap = sup_norm(TruncatedVector<S>(map.members[i] - map.members[j]));
      if (!smallest || gap < *smallest) smallest = gap;
    }
  }
  return factor * smallest.value_or(S(0));
}

template <class S>
Json check_divergence(const DifferenceQuotientTrace<S>& trace, const S& floor) {
  std::optional<S> min_gap;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    for (std::size_t j = i + 1; j < trace.size(); ++j) {
      if (!min_gap || trace.gaps[i][j] < *min_gap) min_gap = trace.gaps[i][j];
    }
  }
  const bool ok = assert_divergence(trace, floor);
  return {{"passed", ok},
          {"floor", format_scalar(floor)},
          {"min_gap", min_gap ? Json(format_scalar(*min_gap)) : Json(nullptr)}};
}

template <class S>
DualFunctional<S> load_probe(const std::string& arg) {
  if (arg == "canonical") return canonical_probe<S>();
  if (arg == "decreasing") return decreasing_probe<S>();
  if (looks_like_file(arg)) return io::functional_from_json<S>(read_json(arg));
  bad("unknown probe '" + arg + "' (expected canonical, decreasing or a JSON file)");
}

template <class S>
FamilySpec<S> load_family(const std::string& arg) {
  if (looks_like_file(arg)) return io::family_from_json<S>(read_json(arg));
  FamilySpec<S> spec;
  spec.kind = parse_family_kind(arg);
  if (spec.kind == FamilyKind::explicit_list) bad("explicit families must be given as a JSON file");
  return spec;
}

template <class S>
Json plan_document(const Counterexample<S>& cx) {
  const RayMapping<S>& map = cx.map;
  Json doc = io::to_json(map.plan);
  doc["mode"] = "counterexample";
  doc["precision"] = ScalarTraits<S>::name;
  doc["depth"] = map.depth();
  doc["target_z"] = format_scalar(map.options.target_z);
  doc["requested_q"] = map.options.q ? Json(format_scalar(*map.options.q)) : Json(nullptr);
  doc["forced_case"] =
      map.options.forced_case ? Json(to_string(*map.options.forced_case)) : Json("auto");
  doc["family"] = io::to_json(map.family);
  doc["probe"] = io::to_json(map.probe);
  doc["cone"] = io::to_json(cx.cone);
  doc["raw_limit"] = cx.raw_limit.value ? Json(format_scalar(*cx.raw_limit.value)) : Json(nullptr);
  doc["node_coefficients"] = io::scalars_json(map.node_coefficients);
  return doc;
}

template <class S>
Counterexample<S> rebuild_from_plan(const Json& doc) {
  const FamilySpec<S> family = io::family_from_json<S>(doc.at("family"));
  const DualFunctional<S> probe = io::functional_from_json<S>(doc.at("probe"));
  CounterexampleOptions<S> options;
  options.target_z = io::scalar_from_json<S>(doc.at("target_z"));
  if (doc.contains("requested_q") && !doc.at("requested_q").is_null()) {
    options.q = io::scalar_from_json<S>(doc.at("requested_q"));
  }
  options.depth = doc.at("depth").get<std::size_t>();
  options.max_depth = options.depth;
  options.forced_case = parse_case_choice(doc.value("forced_case", std::string("auto")));
  return build_counterexample(family, probe, options);
}

template <class S>
void run_map_checks(Suite& suite, const Counterexample<S>& cx, const std::vector<std::string>& checks,
                    std::size_t trials, std::uint64_t seed, const std::optional<S>& gap_floor,
                    ConvexityReport* convexity_out) {
  const RayMapping<S>& map = cx.map;
  auto wants = [&](const char* name) {
    return checks.empty() || std::find(checks.begin(), checks.end(), name) != checks.end();
  };
  if (wants("slopes")) suite.run("slopes", [&] { return check_slopes(map.plan.knots_t, map.plan.values_a); });
  if (wants("interp")) suite.run("interp", [&] { return check_interp(map.plan.knots_t, map.plan.values_a); });
  if (wants("scalarize")) {
    suite.run("scalarize", [&] {
      return io::to_json(scalarization_identity(map, cx.cone, log_spaced_samples(map, kScalarizeSamples)));
    });
  }
  if (wants("convexity")) {
    suite.run("convexity", [&] {
      ConvexityReport report = verify_K_convexity(map, cx.cone, trials, seed);
      if (convexity_out) *convexity_out = report;
      return io::to_json(report);
    });
  }
  if (wants("divergence")) {
    suite.run("divergence", [&] {
      const auto trace = quotient_trace(map, cx.cone, all_labels(map));
      return check_divergence(trace, gap_floor ? *gap_floor : default_gap_floor(map));
    });
  }
  if (wants("monotonicity")) {
    suite.run("monotonicity",
              [&] { return io::to_json(quotient_monotonicity(map, cx.cone, map.knots())); });
  }
}

// Rows of a quotients CSV against a fresh trace of the rebuilt mapping.
template <class S>
Json check_quotient_csv(const std::string& path, const Counterexample<S>& cx) {
  const io::CsvTable table = io::parse_csv(read_file(path));
  const std::vector<std::string> expected_header{"k", "m_k", "t_k", "scalarized", "gap_to_previous"};
  if (table.header != expected_header) bad("'" + path + "' does not have the quotient columns");
  std::vector<std::size_t> ks;
  for (const auto& row : table.rows) {
    const long k = std::stol(row[0]);
    if (k < 1 || static_cast<std::size_t>(k) > cx.map.depth()) {
      bad("'" + path + "' names knot " + row[0] + " outside the plan");
    }
    ks.push_back(static_cast<std::size_t>(k));
  }
  const auto trace = quotient_trace(cx.map, cx.cone, ks);
  Json mismatches = Json::array();
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    bool ok = std::stoul(row[1]) == trace.ms[i] &&
              scalar_equal(parse_scalar<S>(row[2]), trace.ts[i]) &&
              scalar_equal(parse_scalar<S>(row[3]), trace.scalarized[i]);
    if (i == 0 || trace.gaps.empty()) {
      ok = ok && row[4].empty();
    } else {
      ok = ok && !row[4].empty() && scalar_equal(parse_scalar<S>(row[4]), trace.gaps[i][i - 1]);
    }
    if (!ok) mismatches.push_back(i + 1);
  }
  return {{"passed", mismatches.empty()}, {"rows", table.rows.size()}, {"mismatched_rows", mismatches}};
}

template <class S>
int run_counterexample(const RunConfig& config, Artifacts& files, std::ostream& out) {
  CounterexampleOptions<S> options;
  options.target_z = parse_scalar<S>(config.target_z);
  options.q = optional_scalar<S>(config.q);
  options.depth = config.depth;
  options.max_depth = config.depth;
  options.forced_case = parse_case_choice(config.case_choice);
  const std::optional<S> floor = optional_scalar<S>(config.gap_floor);

  const Counterexample<S> cx = build_counterexample_scanning(load_family<S>(config.family),
                                                load_probe<S>(config.probe), options, config.terms);
  const RayMapping<S>& map = cx.map;
  out << "case " << to_string(map.case_kind()) << ", depth " << map.depth() << ", indices";
  for (std::size_t m : map.plan.sub_indices) out << ' ' << m;
  out << "\n";

  Suite suite;
  ConvexityReport convexity;
  run_map_checks(suite, cx, {}, config.trials, config.seed, floor, &convexity);
  suite.summarize(out);

  files.add("plan.json", dump(plan_document(cx)));
  files.add("plan.csv", io::plan_csv(map.plan));
  files.add("quotients.csv", io::quotient_csv(quotient_trace(map, cx.cone, all_labels(map))));
  Json conv = io::to_json(convexity);
  conv["precision"] = ScalarTraits<S>::name;
  files.add("convexity_report.json", dump(conv));
  Json report = {{"command", "counterexample"},
                 {"precision", ScalarTraits<S>::name},
                 {"seed", config.seed},
                 {"depth", map.depth()},
                 {"passed", suite.passed()},
                 {"checks", suite.checks()}};
  files.add("report.json", dump(report));
  return suite.passed() ? kPass : kCheckFailed;
}

std::vector<std::string> applicable_checks(const std::vector<std::string>& requested, bool has_map) {
  static const std::vector<std::string> map_checks{"slopes",     "interp",     "scalarize",
                                                   "convexity",  "divergence", "monotonicity"};
  if (requested.empty()) {
    return has_map ? map_checks : std::vector<std::string>{"slopes", "interp"};
  }
  for (const std::string& c : requested) {
    if (std::find(map_checks.begin(), map_checks.end(), c) == map_checks.end()) {
      bad("unknown check '" + c + "'");
    }
    if (!has_map && c != "slopes" && c != "interp") {
      bad("check '" + c + "' needs a counterexample plan");
    }
  }
  return requested;
}

template <class S>
int run_verify(const RunConfig& config, const Json& doc, Artifacts& files, std::ostream& out) {
  const std::string mode = doc.value("mode", std::string("counterexample"));
  const bool has_map = mode == "counterexample";
  const std::vector<std::string> checks = applicable_checks(config.checks, has_map);
  const std::vector<S> knots = io::scalars_from_json<S>(doc.at("knots"));
  const std::vector<S> values = io::scalars_from_json<S>(doc.at("values"));
  if (knots.size() != values.size()) bad("plan knots and values differ in length");

  Suite suite;
  std::size_t depth = knots.size();
  if (!has_map) {
    if (config.quotients_path) bad("--quotients needs a counterexample plan");
    for (const std::string& c : checks) {
      if (c == "slopes") suite.run("slopes", [&] { return check_slopes(knots, values); });
      if (c == "interp") suite.run("interp", [&] { return check_interp(knots, values); });
    }
  } else {
    const InterpolationPlan<S> stored = io::plan_from_json<S>(doc);
    const Counterexample<S> cx = rebuild_from_plan<S>(doc);
    depth = cx.map.depth();
    suite.run("plan_match", [&] {
      const auto& p = cx.map.plan;
      const bool ok = p.sub_indices == stored.sub_indices && same_scalars(p.knots_t, stored.knots_t) &&
                      same_scalars(p.values_a, stored.values_a) &&
                      p.case_tag.kind == stored.case_tag.kind;
      return Json{{"passed", ok}};
    });
    // The stored numbers are what the slope and interpolation checks judge.
    std::vector<std::string> rest;
    for (const std::string& c : checks) {
      if (c == "slopes") {
        suite.run("slopes", [&] { return check_slopes(knots, values); });
      } else if (c == "interp") {
        suite.run("interp", [&] { return check_interp(knots, values); });
      } else {
        rest.push_back(c);
      }
    }
    if (!rest.empty()) {
      run_map_checks(suite, cx, rest, config.trials, config.seed, optional_scalar<S>(config.gap_floor),
                     nullptr);
    }
    if (config.quotients_path) {
      suite.run("quotients_csv", [&] { return check_quotient_csv(*config.quotients_path, cx); });
    }
  }
  suite.summarize(out);
  Json report = {{"command", "verify"},
                 {"plan", config.input_path},
                 {"mode", mode},
                 {"precision", ScalarTraits<S>::name},
                 {"seed", config.seed},
                 {"depth", depth},
                 {"passed", suite.passed()},
                 {"checks", suite.checks()}};
  files.add("verify_report.json", dump(report));
  return suite.passed() ? kPass : kCheckFailed;
}

template <class S>
int run_extend(const RunConfig& config, const Json& doc, Artifacts& files, std::ostream& out) {
  if (doc.value("mode", std::string("counterexample")) != "counterexample") {
    bad("extend needs a counterexample plan");
  }
  const Counterexample<S> cx = rebuild_from_plan<S>(doc);
  HalfSpaceHost<S> host;
  if (config.direction_h.empty()) {
    host = HalfSpaceHost<S>::standard(config.dimension);
  } else {
    host.direction_h = io::parse_scalar_list<S>(config.direction_h);
    host.dimension = host.direction_h.size();
    if (host.dimension != config.dimension) bad("--h does not match --dimension");
  }
  const ExtendedMapping<S> ext = extend_to_halfspace(cx.map, host);

  Suite suite;
  suite.run("ray_agreement", [&] {
    Json mismatches = Json::array();
    const std::vector<S> ts = log_spaced_samples(cx.map, kExtensionSamples);
    for (std::size_t i = 0; i < ts.size(); ++i) {
      std::vector<S> x(host.dimension);
      for (std::size_t d = 0; d < host.dimension; ++d) x[d] = ts[i] * host.direction_h[d];
      if (!(ext(x) == eval_F(cx.map, ts[i]))) mismatches.push_back(i);
    }
    return Json{{"passed", mismatches.empty()}, {"samples", ts.size()}, {"mismatches", mismatches}};
  });
  suite.run("orthogonal_zero", [&] {
    Json nonzero = Json::array();
    // x = e_i - <e_i,h> h is orthogonal to h.
    for (std::size_t i = 0; i < host.dimension; ++i) {
      std::vector<S> x(host.dimension, S(0));
      for (std::size_t d = 0; d < host.dimension; ++d) {
        x[d] = (d == i ? S(1) : S(0)) - host.direction_h[i] * host.direction_h[d];
      }
      const S r = host.inner(x);
      if (!scalar_equal(r, S(0))) continue;
      if (ScalarTraits<S>::exact && !ext(x).is_zero()) nonzero.push_back(i);
    }
    return Json{{"passed", nonzero.empty()}, {"samples", host.dimension}, {"nonzero", nonzero}};
  });
  suite.run("convexity", [&] { return io::to_json(verify_K_convexity(ext, cx.cone, config.trials, config.seed)); });
  suite.summarize(out);
  Json report = {{"command", "extend"},
                 {"plan", config.input_path},
                 {"dimension", host.dimension},
                 {"h", io::scalars_json(host.direction_h)},
                 {"precision", ScalarTraits<S>::name},
                 {"seed", config.seed},
                 {"depth", cx.map.depth()},
                 {"passed", suite.passed()},
                 {"checks", suite.checks()}};
  files.add("extension_report.json", dump(report));
  return suite.passed() ? kPass : kCheckFailed;
}

template <class S>
int run_build_convex(const RunConfig& config, Artifacts& files, std::ostream& out) {
  if (config.sequence.empty()) bad("--sequence is required");
  const std::vector<S> seq = io::parse_scalar_list<S>(config.sequence);
  Json doc;
  std::vector<S> knots;
  std::vector<S> values;
  std::vector<std::size_t> indices;
  if (config.mode == "prop41") {
    const Prop41Result<S> res = build_prop41<S>(seq);
    indices = res.indices;
    knots = res.g.knots;
    values = res.g.values;
    doc["zero_crossings"] = io::scalars_json(res.zero_crossings);
  } else if (config.mode == "lemma") {
    knots = io::parse_scalar_list<S>(config.knots);
    values = seq;
    if (knots.size() != values.size()) bad("--knots and --sequence differ in length");
    build_sup_of_lines(knots, values);
    for (std::size_t k = 1; k <= knots.size(); ++k) indices.push_back(k);
  } else if (config.mode == "plan") {
    PlanRequest<S> request;
    if (config.limit_z) {
      request.limit_z = parse_scalar<S>(*config.limit_z);
    } else {
      const LimitEstimate<S> est = extrapolate_limit<S>(seq);
      if (!est.value) bad("no closed-form limit for the sequence; pass --limit-z");
      request.limit_z = *est.value;
    }
    request.q = optional_scalar<S>(config.q);
    request.depth = config.depth;
    request.forced_case = parse_case_choice(config.case_choice);
    const InterpolationPlan<S> plan = plan_case<S>(seq, request);
    doc = io::to_json(plan);
    indices = plan.sub_indices;
    knots = plan.knots_t;
    values = plan.values_a;
  } else {
    bad("unknown mode '" + config.mode + "' (expected prop41, lemma or plan)");
  }
  doc["mode"] = config.mode;
  doc["precision"] = ScalarTraits<S>::name;
  doc["indices"] = indices;
  doc["knots"] = io::scalars_json(knots);
  doc["values"] = io::scalars_json(values);

  out << "indices";
  for (std::size_t m : indices) out << ' ' << m;
  out << "\n";
  // Prop41 indices run upward while its knots run downward.
  std::vector<std::size_t> row_m = indices;
  if (config.mode == "prop41") std::reverse(row_m.begin(), row_m.end());
  std::ostringstream csv;
  csv << "k,m_k,t_k,a_k\n";
  for (std::size_t k = 0; k < knots.size(); ++k) {
    csv << (k + 1) << ',' << row_m[k] << ',' << format_scalar(knots[k]) << ','
        << format_scalar(values[k]) << '\n';
  }
  files.add("plan.json", dump(doc));
  files.add("plan.csv", csv.str());
  return kPass;
}

template <class S>
int run_demo_linf(const RunConfig& config, Artifacts& files, std::ostream& out) {
  const std::vector<S> gaps = infimum_gap_demo<S>(config.n_max);
  std::ostringstream csv;
  csv << "n,gap\n";
  std::size_t off = 0;
  for (std::size_t n = 0; n < gaps.size(); ++n) {
    csv << (n + 1) << ',' << format_scalar(gaps[n]) << '\n';
    if (!(gaps[n] == S(1))) ++off;
  }
  files.add("linf_demo.csv", csv.str());
  out << (off == 0 ? "PASS" : "FAIL") << " every gap equals 1 (" << gaps.size() << " entries)\n";
  return off == 0 ? kPass : kCheckFailed;
}

template <class S>
int dispatch(const RunConfig& config, Artifacts& files, std::ostream& out) {
  switch (config.command) {
    case Command::build_convex: return run_build_convex<S>(config, files, out);
    case Command::counterexample: return run_counterexample<S>(config, files, out);
    case Command::verify: return run_verify<S>(config, read_json(config.input_path), files, out);
    case Command::extend: return run_extend<S>(config, read_json(config.input_path), files, out);
    case Command::demo_linf: return run_demo_linf<S>(config, files, out);
  }
  return kInputError;
}

Precision precision_of_plan(const RunConfig& config) {
  if (config.command != Command::verify && config.command != Command::extend) return config.precision;
  if (config.input_path.empty()) bad("--plan is required");
  const Json doc = read_json(config.input_path);
  const std::string p = doc.value("precision", std::string("rational"));
  if (p == "rational") return Precision::Rational;
  if (p == "float64") return Precision::Float64;
  bad("unknown precision '" + p + "' in plan");
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.depth < 2 && config.command != Command::demo_linf) bad("depth must be at least 2");
    if (config.command == Command::demo_linf && config.n_max < 1) bad("n-max must be at least 1");
    fs::path out_dir = config.out_dir;
    if (const char* env = std::getenv("WSC_FORGE_OUT"); env && *env) out_dir = env;

    // Plans carry their own precision.
    const Precision precision = precision_of_plan(config);
    Artifacts files;
    const int code = precision == Precision::Rational ? dispatch<Rational>(config, files, out)
                                                      : dispatch<double>(config, files, out);
    files.write(out_dir, out);
    return code;
  } catch (const Error& e) {
    err << "wsc_forge: error: " << e.what();
    if (e.index()) err << " (index " << *e.index() << ")";
    err << "\n";
  } catch (const Json::exception& e) {
    err << "wsc_forge: error: malformed input: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "wsc_forge: error: " << e.what() << "\n";
  }
  return kInputError;
}

int run(const RunConfig& config) { return run(config, std::cout, std::cerr); }

int main(int argc, const char* const* argv) {
  CLI::App app{"Builds convex interpolants and cone-convex counterexamples and verifies them",
               "wsc_forge"};
  app.require_subcommand(1);
  RunConfig config;
  std::string precision = "rational";

  auto common = [&](CLI::App* sub, bool seeded) {
    sub->add_option("--precision", precision, "rational or float64")
        ->check(CLI::IsMember({"rational", "float64"}));
    sub->add_option("--out-dir", config.out_dir, "Artifact directory (WSC_FORGE_OUT overrides)");
    if (seeded) {
      sub->add_option("--seed", config.seed, "Sampler seed");
      sub->add_option("--trials", config.trials, "Convexity trials");
    }
  };

  CLI::App* build = app.add_subcommand("build-convex", "Convex interpolant through a sequence");
  common(build, false);
  build->add_option("--sequence", config.sequence, "Values, e.g. '[1, 1/2, 1/3]'")->required();
  build->add_option("--mode", config.mode, "prop41, lemma or plan")
      ->check(CLI::IsMember({"prop41", "lemma", "plan"}));
  build->add_option("--knots", config.knots, "Knots for lemma mode, strictly decreasing");
  build->add_option("--limit-z", config.limit_z, "Limit of the sequence for plan mode");
  build->add_option("--q", config.q, "Parameter q for cases 2 and 4");
  build->add_option("--case", config.case_choice, "auto or 1..4");
  build->add_option("--depth", config.depth, "Number of knots for plan mode");

  CLI::App* cx = app.add_subcommand("counterexample", "Assemble and check the ray mapping");
  common(cx, true);
  cx->add_option("--family", config.family, "c0-partial-sums, linf-neg-prefix or a JSON file");
  cx->add_option("--probe", config.probe, "canonical, decreasing or a JSON file");
  cx->add_option("--case", config.case_choice, "auto or 1..4");
  cx->add_option("--q", config.q, "Parameter q for cases 2 and 4");
  cx->add_option("--target-z", config.target_z, "Limit after rescaling the probe");
  cx->add_option("--depth", config.depth, "Number of knots");
  cx->add_option("--terms", config.terms, "Family members scanned (0 = grow as needed)");
  cx->add_option("--gap-floor", config.gap_floor, "Divergence floor override");

  CLI::App* verify = app.add_subcommand("verify", "Re-run checks against a plan file");
  common(verify, true);
  verify->add_option("--plan", config.input_path, "plan.json")->required();
  verify->add_option("--checks", config.checks,
                     "Comma list of slopes,interp,scalarize,convexity,divergence,monotonicity")
      ->delimiter(',');
  verify->add_option("--quotients", config.quotients_path, "quotients.csv to re-verify");
  verify->add_option("--gap-floor", config.gap_floor, "Divergence floor override");

  CLI::App* extend = app.add_subcommand("extend", "Extend a ray mapping to a half-space");
  extend->set_help_flag("--help", "Print this help message and exit");  // frees -h for --h
  common(extend, true);
  extend->add_option("--plan", config.input_path, "plan.json")->required();
  extend->add_option("--dimension", config.dimension, "Host dimension");
  extend->add_option("--h", config.direction_h, "Unit direction, e.g. '[3/5, 4/5]'");

  CLI::App* demo = app.add_subcommand("demo-linf", "Infimum gap demo in l-infinity");
  common(demo, false);
  demo->add_option("--n-max", config.n_max, "Largest n");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kInputError;
  }
  config.command = parse_command(app.get_subcommands().front()->get_name());
  config.precision = precision == "float64" ? Precision::Float64 : Precision::Rational;
  return run(config);
}

}  // namespace wsc::cli
