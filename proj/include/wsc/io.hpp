#ifndef WSC_IO_HPP
#define WSC_IO_HPP

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "wsc/cones.hpp"
#include "wsc/convex_construction.hpp"
#include "wsc/divergence.hpp"
#include "wsc/sequence_spaces.hpp"

namespace wsc::io {

using Json = nlohmann::json;

// Scalars travel as strings ("p/q" for rationals, shortest round-trip
// decimal for floats). Readers also accept bare JSON numbers.
template <class S>
Json scalar_json(const S& value) {
  return format_scalar(value);
}

template <class S>
S scalar_from_json(const Json& j);

template <class S>
Json scalars_json(const std::vector<S>& values) {
  Json out = Json::array();
  for (const S& v : values) out.push_back(scalar_json(v));
  return out;
}

template <class S>
std::vector<S> scalars_from_json(const Json& j);

// "[1, 1/2, 0.25]" or a JSON array of strings/numbers.
template <class S>
std::vector<S> parse_scalar_list(std::string_view text);

template <class S>
Json to_json(const TruncatedVector<S>& y);
template <class S>
TruncatedVector<S> vector_from_json(const Json& j);

// {"head": [...], "tail": {"rule": "geometric", "ratio": "1/2", "start": "1/16"}}
template <class S>
Json to_json(const DualFunctional<S>& f);
template <class S>
DualFunctional<S> functional_from_json(const Json& j);

// {"kind": "c0_partial_sums", "depth": n}; explicit families add "vectors".
template <class S>
Json to_json(const FamilySpec<S>& spec);
template <class S>
FamilySpec<S> family_from_json(const Json& j);

// {"generator": <functional>, "tolerance": "0"}
template <class S>
Json to_json(const HalfSpaceCone<S>& cone);
template <class S>
HalfSpaceCone<S> cone_from_json(const Json& j);

// {"case", "q", "c", "indices", "knots", "values", "thresholds", ...}
template <class S>
Json to_json(const InterpolationPlan<S>& plan);
template <class S>
InterpolationPlan<S> plan_from_json(const Json& j);

Json to_json(const ConvexityReport& report);
Json to_json(const ScalarizationReport& report);

template <class S>
Json to_json(const MonotonicityReport<S>& report);

// k,m_k,t_k,a_k
template <class S>
std::string plan_csv(const InterpolationPlan<S>& plan);

// k,m_k,t_k,scalarized,gap_to_previous (empty gap on the first row)
template <class S>
std::string quotient_csv(const DifferenceQuotientTrace<S>& trace);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable parse_csv(std::string_view text);

}  // namespace wsc::io

#endif  // WSC_IO_HPP
