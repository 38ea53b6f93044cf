#ifndef WSC_DIVERGENCE_HPP
#define WSC_DIVERGENCE_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "wsc/cones.hpp"
#include "wsc/convex_construction.hpp"
#include "wsc/sequence_spaces.hpp"

namespace wsc {

template <class S>
struct CounterexampleOptions {
  S target_z = ratio<S>(1, 2);
  std::optional<S> q;
  std::size_t depth = 8;
  std::optional<CaseKind> forced_case;
  // Ceiling for lazy deepening; 0 means "no deepening beyond depth".
  std::size_t max_depth = 0;
};

// F on the ray {r h : r >= 0}. Only the scalar r is modelled; the direction
// h is implicit. Node k sits at r = knots_t[k] with value node_vectors[k].
template <class S>
struct RayMapping {
  InterpolationPlan<S> plan;
  std::vector<TruncatedVector<S>> members;       // y_{m_k}
  std::vector<TruncatedVector<S>> node_vectors;  // F(t_k h)
  std::vector<S> node_coefficients;              // node_vectors[k] = coeff * members[k]

  // Inputs kept so the mapping can be rebuilt deeper.
  FamilySpec<S> family;
  DualFunctional<S> probe;
  CounterexampleOptions<S> options;

  CaseKind case_kind() const { return plan.case_tag.kind; }
  const std::vector<S>& knots() const { return plan.knots_t; }
  std::size_t depth() const { return plan.knots_t.size(); }
};

template <class S>
struct Counterexample {
  HalfSpaceCone<S> cone;  // generated by the rescaled probe
  RayMapping<S> map;
  std::vector<S> raw_values;  // probe(y_m), m = 1..family.depth
  LimitEstimate<S> raw_limit;
};

// family.depth is the number of family members available to the planner.
template <class S>
Counterexample<S> build_counterexample(const FamilySpec<S>& family, const DualFunctional<S>& probe,
                                       const CounterexampleOptions<S>& options);

// Closed-form families are scanned over `terms` members; terms = 0 starts at
// 64 and doubles (up to 4096) while the planner runs out of terms.
template <class S>
Counterexample<S> build_counterexample_scanning(FamilySpec<S> family, const DualFunctional<S>& probe,
                                                const CounterexampleOptions<S>& options,
                                                std::size_t terms);

template <class S>
TruncatedVector<S> eval_F(const RayMapping<S>& map, const S& r);

// Rebuilds the mapping with more knots until r is covered or
// options.max_depth is reached, then evaluates.
template <class S>
TruncatedVector<S> eval_F_deepening(Counterexample<S>& cx, const S& r);

struct ScalarizationReport {
  std::size_t samples = 0;
  std::vector<std::size_t> mismatches;  // 0-based sample positions
  bool passed() const { return mismatches.empty(); }
};

template <class S>
ScalarizationReport scalarization_identity(const RayMapping<S>& map, const HalfSpaceCone<S>& cone,
                                           const std::vector<S>& sample_rs);

// r values spread evenly in log-scale over the covered range, one per
// piece slot; exact dyadic interpolation inside each piece.
template <class S>
std::vector<S> log_spaced_samples(const RayMapping<S>& map, std::size_t count);

struct ConvexityViolation {
  std::size_t trial = 0;
  std::size_t detail = 0;  // lambda index or dual-ray scale index
};

struct ConvexityReport {
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::size_t depth = 0;
  std::size_t direct_checks = 0;
  std::size_t scalar_checks = 0;
  std::size_t epigraph_checks = 0;
  std::vector<ConvexityViolation> direct_violations;
  std::vector<ConvexityViolation> scalar_violations;
  std::vector<ConvexityViolation> epigraph_violations;

  bool direct_passed() const { return direct_violations.empty(); }
  bool scalar_passed() const { return scalar_violations.empty(); }
  bool epigraph_passed() const { return epigraph_violations.empty(); }
  bool passed() const { return direct_passed() && scalar_passed() && epigraph_passed(); }
};

template <class S>
ConvexityReport verify_K_convexity(const RayMapping<S>& map, const HalfSpaceCone<S>& cone,
                                   std::size_t trials, std::uint64_t seed);

template <class S>
struct DifferenceQuotientTrace {
  std::vector<std::size_t> ks;  // 1-based knot labels, empty for ad-hoc traces
  std::vector<std::size_t> ms;
  std::vector<S> ts;
  std::vector<TruncatedVector<S>> quotients;
  std::vector<S> scalarized;
  std::vector<std::vector<S>> gaps;  // sup-norm distances; empty below two entries

  std::size_t size() const { return ts.size(); }
};

// q(t) = (F(t) - F(0)) / t for an arbitrary ray map.
template <class S>
DifferenceQuotientTrace<S> trace_quotients(const std::function<TruncatedVector<S>(const S&)>& F,
                                           const std::vector<S>& ts,
                                           const DualFunctional<S>& generator);

// ks are 1-based knot labels.
template <class S>
DifferenceQuotientTrace<S> quotient_trace(const RayMapping<S>& map, const HalfSpaceCone<S>& cone,
                                          const std::vector<std::size_t>& ks);

// Every pairwise gap >= gap_floor, so q(t) is not norm-Cauchy along the
// traced t and the directional derivative cannot exist.
template <class S>
bool assert_divergence(const DifferenceQuotientTrace<S>& trace, const S& gap_floor);

template <class S>
struct MonotonicityReport {
  std::vector<S> scalarized;
  std::vector<std::size_t> violations;  // i where q(t[i+1]) <=_K q(t[i]) fails
  bool passed() const { return violations.empty(); }
};

// t_grid must be nonincreasing.
template <class S>
MonotonicityReport<S> quotient_monotonicity(const RayMapping<S>& map, const HalfSpaceCone<S>& cone,
                                            const std::vector<S>& t_grid);

// Coordinate space R^dimension with the Euclidean inner product.
template <class S>
struct HalfSpaceHost {
  std::size_t dimension = 5;
  std::vector<S> direction_h;

  // A rational unit vector for the given dimension.
  static HalfSpaceHost standard(std::size_t dimension);

  S inner(const std::vector<S>& x) const;
};

template <class S>
struct ExtendedMapping {
  RayMapping<S> map;
  HalfSpaceHost<S> host;

  // F(<x,h> h); OutsideDomain when <x,h> < 0.
  TruncatedVector<S> operator()(const std::vector<S>& x) const;
};

template <class S>
ExtendedMapping<S> extend_to_halfspace(const RayMapping<S>& map, const HalfSpaceHost<S>& host);

template <class S>
ConvexityReport verify_K_convexity(const ExtendedMapping<S>& ext, const HalfSpaceCone<S>& cone,
                                   std::size_t trials, std::uint64_t seed);

}  // namespace wsc

#endif  // WSC_DIVERGENCE_HPP
