#include "wsc/io.hpp"

#include <cctype>
#include <sstream>

namespace wsc::io {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::InvalidInput, what); }

const Json& field(const Json& j, const char* name) {
  if (!j.is_object()) bad(std::string("expected an object with field '") + name + "'");
  auto it = j.find(name);
  if (it == j.end()) bad(std::string("missing field '") + name + "'");
  return *it;
}

std::size_t size_from_json(const Json& j, const char* what) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0) {
    bad(std::string(what) + " must be a nonnegative integer");
  }
  return j.get<std::size_t>();
}

Json violations_json(const std::vector<ConvexityViolation>& vs) {
  Json out = Json::array();
  for (const auto& v : vs) out.push_back({{"trial", v.trial}, {"detail", v.detail}});
  return out;
}

}  // namespace

template <class S>
S scalar_from_json(const Json& j) {
  if (j.is_string()) return parse_scalar<S>(j.get<std::string>());
  if (j.is_number_integer()) return parse_scalar<S>(j.dump());
  if (j.is_number_float()) {
    if constexpr (ScalarTraits<S>::exact) {
      bad("rational scalars must be strings or integers, got " + j.dump());
    } else {
      return j.get<double>();
    }
  }
  bad("expected a scalar, got " + j.dump());
}

template <class S>
std::vector<S> scalars_from_json(const Json& j) {
  if (!j.is_array()) bad("expected an array of scalars");
  std::vector<S> out;
  out.reserve(j.size());
  for (const Json& e : j) out.push_back(scalar_from_json<S>(e));
  return out;
}

template <class S>
std::vector<S> parse_scalar_list(std::string_view text) {
  text = trim(text);
  if (text.size() >= 2 && text.front() == '[' && text.back() == ']') {
    text = text.substr(1, text.size() - 2);
  }
  std::vector<S> out;
  if (trim(text).empty()) return out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view token = trim(text.substr(start, comma - start));
    if (token.size() >= 2 && token.front() == '"' && token.back() == '"') {
      token = token.substr(1, token.size() - 2);
    }
    if (token.empty()) bad("empty entry in scalar list");
    out.push_back(parse_scalar<S>(token));
    start = comma + 1;
  }
  return out;
}

template <class S>
Json to_json(const TruncatedVector<S>& y) {
  return {{"space", y.space() == SpaceTag::c0 ? "c0" : "linf"}, {"coords", scalars_json(y.coords())}};
}

template <class S>
TruncatedVector<S> vector_from_json(const Json& j) {
  if (j.is_array()) return TruncatedVector<S>(scalars_from_json<S>(j));
  SpaceTag space = SpaceTag::c0;
  if (j.contains("space")) {
    const std::string tag = j.at("space").get<std::string>();
    if (tag == "linf") {
      space = SpaceTag::linf;
    } else if (tag != "c0") {
      bad("unknown space tag '" + tag + "'");
    }
  }
  return TruncatedVector<S>(scalars_from_json<S>(field(j, "coords")), space);
}

template <class S>
Json to_json(const DualFunctional<S>& f) {
  Json tail;
  if (f.tail()) {
    tail = {{"rule", "geometric"},
            {"ratio", scalar_json(f.tail()->ratio)},
            {"start", scalar_json(f.tail()->start)}};
  } else {
    tail = {{"rule", "zero"}};
  }
  return {{"head", scalars_json(f.head())}, {"tail", tail}};
}

template <class S>
DualFunctional<S> functional_from_json(const Json& j) {
  std::vector<S> head = scalars_from_json<S>(field(j, "head"));
  std::optional<GeometricTail<S>> tail;
  if (j.contains("tail") && !j.at("tail").is_null()) {
    const Json& t = j.at("tail");
    const std::string rule = field(t, "rule").get<std::string>();
    if (rule == "geometric") {
      tail = GeometricTail<S>{scalar_from_json<S>(field(t, "ratio")),
                              scalar_from_json<S>(field(t, "start"))};
    } else if (rule != "zero") {
      bad("unknown tail rule '" + rule + "'");
    }
  }
  return DualFunctional<S>(std::move(head), std::move(tail));
}

template <class S>
Json to_json(const FamilySpec<S>& spec) {
  Json out = {{"kind", to_string(spec.kind)}, {"depth", spec.depth}};
  if (spec.kind == FamilyKind::explicit_list) {
    Json vs = Json::array();
    for (const auto& v : spec.vectors) vs.push_back(to_json(v));
    out["vectors"] = vs;
  }
  return out;
}

template <class S>
FamilySpec<S> family_from_json(const Json& j) {
  FamilySpec<S> spec;
  spec.kind = parse_family_kind(field(j, "kind").get<std::string>());
  if (spec.kind == FamilyKind::explicit_list) {
    for (const Json& v : field(j, "vectors")) spec.vectors.push_back(vector_from_json<S>(v));
    spec.depth = j.contains("depth") ? size_from_json(j.at("depth"), "depth") : spec.vectors.size();
  } else {
    spec.depth = size_from_json(field(j, "depth"), "depth");
  }
  return spec;
}

template <class S>
Json to_json(const HalfSpaceCone<S>& cone) {
  return {{"generator", to_json(cone.generator)}, {"tolerance", scalar_json(cone.tolerance)}};
}

template <class S>
HalfSpaceCone<S> cone_from_json(const Json& j) {
  HalfSpaceCone<S> cone{functional_from_json<S>(field(j, "generator"))};
  if (j.contains("tolerance")) cone.tolerance = scalar_from_json<S>(j.at("tolerance"));
  if (cone.tolerance < S(0)) bad("cone tolerance must be nonnegative");
  return cone;
}

template <class S>
Json to_json(const InterpolationPlan<S>& plan) {
  Json out;
  out["case"] = to_string(plan.case_tag.kind);
  out["q"] = plan.case_tag.q ? Json(scalar_json(*plan.case_tag.q)) : Json(nullptr);
  out["c"] = scalar_json(plan.scale_c);
  out["limit_z"] = scalar_json(plan.limit_z);
  out["direction"] = to_string(plan.direction);
  out["constant"] = plan.constant;
  out["dropped_prefix"] = plan.dropped_prefix;
  out["indices"] = plan.sub_indices;
  out["knots"] = scalars_json(plan.knots_t);
  out["values"] = scalars_json(plan.values_a);
  out["thresholds"] = scalars_json(plan.thresholds);
  return out;
}

template <class S>
InterpolationPlan<S> plan_from_json(const Json& j) {
  InterpolationPlan<S> plan;
  plan.case_tag.kind = parse_case_kind(field(j, "case").get<std::string>());
  if (j.contains("q") && !j.at("q").is_null()) plan.case_tag.q = scalar_from_json<S>(j.at("q"));
  if (j.contains("c")) plan.scale_c = scalar_from_json<S>(j.at("c"));
  if (j.contains("limit_z")) plan.limit_z = scalar_from_json<S>(j.at("limit_z"));
  if (j.contains("direction")) {
    const std::string d = j.at("direction").get<std::string>();
    if (d == "increasing") {
      plan.direction = Direction::increasing;
    } else if (d == "nonincreasing") {
      plan.direction = Direction::nonincreasing;
    } else {
      bad("unknown direction '" + d + "'");
    }
  } else {
    const auto k = plan.case_tag.kind;
    plan.direction = (k == CaseKind::IncrHigh || k == CaseKind::IncrLow) ? Direction::increasing
                                                                          : Direction::nonincreasing;
  }
  if (j.contains("constant")) plan.constant = j.at("constant").get<bool>();
  if (j.contains("dropped_prefix")) {
    plan.dropped_prefix = size_from_json(j.at("dropped_prefix"), "dropped_prefix");
  }
  for (const Json& m : field(j, "indices")) plan.sub_indices.push_back(size_from_json(m, "index"));
  plan.knots_t = scalars_from_json<S>(field(j, "knots"));
  plan.values_a = scalars_from_json<S>(field(j, "values"));
  if (j.contains("thresholds")) plan.thresholds = scalars_from_json<S>(j.at("thresholds"));
  if (plan.knots_t.size() != plan.values_a.size() ||
      plan.sub_indices.size() != plan.knots_t.size()) {
    bad("plan indices, knots and values must have equal length");
  }
  return plan;
}

Json to_json(const ConvexityReport& report) {
  auto check = [](std::size_t count, const std::vector<ConvexityViolation>& vs) {
    return Json{{"passed", vs.empty()}, {"checks", count}, {"violations", violations_json(vs)}};
  };
  Json out;
  out["passed"] = report.passed();
  out["trials"] = report.trials;
  out["seed"] = report.seed;
  out["depth"] = report.depth;
  out["direct"] = check(report.direct_checks, report.direct_violations);
  out["scalar_midpoint"] = check(report.scalar_checks, report.scalar_violations);
  out["epigraph"] = check(report.epigraph_checks, report.epigraph_violations);
  return out;
}

Json to_json(const ScalarizationReport& report) {
  return {{"passed", report.passed()}, {"samples", report.samples}, {"mismatches", report.mismatches}};
}

template <class S>
Json to_json(const MonotonicityReport<S>& report) {
  return {{"passed", report.passed()},
          {"scalarized", scalars_json(report.scalarized)},
          {"violations", report.violations}};
}

template <class S>
std::string plan_csv(const InterpolationPlan<S>& plan) {
  std::ostringstream out;
  out << "k,m_k,t_k,a_k\n";
  for (std::size_t k = 0; k < plan.depth(); ++k) {
    out << (k + 1) << ',' << plan.sub_indices[k] << ',' << format_scalar(plan.knots_t[k]) << ','
        << format_scalar(plan.values_a[k]) << '\n';
  }
  return out.str();
}

template <class S>
std::string quotient_csv(const DifferenceQuotientTrace<S>& trace) {
  std::ostringstream out;
  out << "k,m_k,t_k,scalarized,gap_to_previous\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    out << (trace.ks.empty() ? i + 1 : trace.ks[i]) << ',' << (trace.ms.empty() ? 0 : trace.ms[i])
        << ',' << format_scalar(trace.ts[i]) << ',' << format_scalar(trace.scalarized[i]) << ',';
    if (i > 0 && !trace.gaps.empty()) out << format_scalar(trace.gaps[i][i - 1]);
    out << '\n';
  }
  return out.str();
}

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  bool first = true;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    start = end + 1;
    if (trim(line).empty()) continue;
    std::vector<std::string> cells;
    std::size_t pos = 0;
    while (true) {
      std::size_t comma = line.find(',', pos);
      if (comma == std::string_view::npos) {
        cells.emplace_back(trim(line.substr(pos)));
        break;
      }
      cells.emplace_back(trim(line.substr(pos, comma - pos)));
      pos = comma + 1;
    }
    if (first) {
      table.header = std::move(cells);
      first = false;
    } else {
      if (cells.size() != table.header.size()) {
        bad("csv row " + std::to_string(table.rows.size() + 1) + " has " +
            std::to_string(cells.size()) + " cells, header has " +
            std::to_string(table.header.size()));
      }
      table.rows.push_back(std::move(cells));
    }
  }
  if (first) bad("empty csv");
  return table;
}

#define WSC_IO_INSTANTIATE(S)                                                  \
  template S scalar_from_json<S>(const Json&);                                 \
  template std::vector<S> scalars_from_json<S>(const Json&);                   \
  template std::vector<S> parse_scalar_list<S>(std::string_view);              \
  template Json to_json<S>(const TruncatedVector<S>&);                         \
  template TruncatedVector<S> vector_from_json<S>(const Json&);                \
  template Json to_json<S>(const DualFunctional<S>&);                          \
  template DualFunctional<S> functional_from_json<S>(const Json&);             \
  template Json to_json<S>(const FamilySpec<S>&);                              \
  template FamilySpec<S> family_from_json<S>(const Json&);                     \
  template Json to_json<S>(const HalfSpaceCone<S>&);                           \
  template HalfSpaceCone<S> cone_from_json<S>(const Json&);                    \
  template Json to_json<S>(const InterpolationPlan<S>&);                       \
  template InterpolationPlan<S> plan_from_json<S>(const Json&);                \
  template Json to_json<S>(const MonotonicityReport<S>&);                      \
  template std::string plan_csv<S>(const InterpolationPlan<S>&);               \
  template std::string quotient_csv<S>(const DifferenceQuotientTrace<S>&);

WSC_IO_INSTANTIATE(Rational)
WSC_IO_INSTANTIATE(double)

}  // namespace wsc::io
