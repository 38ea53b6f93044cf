#ifndef WSC_CONVEX_CONSTRUCTION_HPP
#define WSC_CONVEX_CONSTRUCTION_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "wsc/sequence_spaces.hpp"

namespace wsc {

// f(x) = anchor_a + slope * (x - anchor_t)
template <class S>
struct AffinePiece {
  S anchor_t;
  S anchor_a;
  S slope;

  S operator()(const S& x) const { return anchor_a + slope * (x - anchor_t); }
};

// Convex interpolant g = max of the secants through consecutive knots.
// Knots are strictly decreasing; piece k joins knot k and knot k+1.
template <class S>
struct SupOfLines {
  std::vector<S> knots;
  std::vector<S> values;
  std::vector<AffinePiece<S>> pieces;
};

struct SlopeCheck {
  bool ok = true;
  // 1-based m of the first pair with slope(m) < slope(m+1).
  std::optional<std::size_t> first_violation;
};

// slope(m) >= slope(m+1) for every consecutive pair of secants. Float mode
// allows a 2^-40 relative slack.
template <class S>
SlopeCheck check_slope_chain(std::span<const S> knots, std::span<const S> values);

template <class S>
SupOfLines<S> build_sup_of_lines(std::vector<S> knots, std::vector<S> values);

// Max over stored pieces. Requires r >= the smallest knot.
template <class S>
S eval_g(const SupOfLines<S>& g, const S& r);

// 0-based piece owning r: piece k covers (knots[k+1], knots[k]], piece 0
// also covers everything above knots[0].
template <class S>
std::size_t piece_index(const SupOfLines<S>& g, const S& r);

// Interval-lookup evaluation; agrees with eval_g on the covered range.
template <class S>
S eval_g_interval(const SupOfLines<S>& g, const S& r);

template <class S>
struct Prop41Result {
  std::vector<std::size_t> indices;  // 1-based m_k, increasing
  SupOfLines<S> g;                   // knots are the m_k in decreasing order
  std::vector<S> zero_crossings;     // zero of the secant k, one per piece
};

// Integer-knot construction for a nonnegative nonincreasing sequence:
// m_1 = 1, m_2 = 2, and each next index is floor(zero of the last secant)
// + 1, until it runs past the supplied terms.
template <class S>
Prop41Result<S> build_prop41(std::span<const S> sequence);

enum class Direction { nonincreasing, increasing };

const char* to_string(Direction direction);

struct MonotoneSubsequence {
  std::vector<std::size_t> indices;  // 1-based
  Direction direction = Direction::nonincreasing;
};

// Peak-point extraction. The peaks (entries >= everything after them) form
// a nonincreasing subsequence; chasing the next strictly larger entry from
// the first non-peak gives an increasing one. The longer wins, ties go to
// the peaks.
template <class S>
MonotoneSubsequence extract_monotone(std::span<const S> values);

template <class S>
struct RescaledFunctional {
  DualFunctional<S> functional;
  S scale;
};

template <class S>
RescaledFunctional<S> rescale_functional(const DualFunctional<S>& probe, const S& raw_limit,
                                         const S& target_z);

enum class CaseKind { NonincLow = 1, NonincHigh = 2, IncrHigh = 3, IncrLow = 4 };

const char* to_string(CaseKind kind);
CaseKind parse_case_kind(std::string_view text);

template <class S>
struct CaseTag {
  CaseKind kind = CaseKind::NonincLow;
  std::optional<S> q;  // present for NonincHigh and IncrLow
};

template <class S>
struct InterpolationPlan {
  CaseTag<S> case_tag;
  S limit_z;
  S scale_c = S(1);
  Direction direction = Direction::nonincreasing;
  bool constant = false;
  std::size_t dropped_prefix = 0;
  std::vector<std::size_t> sub_indices;  // 1-based m_k into the value sequence
  std::vector<S> knots_t;
  std::vector<S> values_a;
  std::vector<S> thresholds;  // the selection constant used for k = 3..depth

  std::size_t depth() const { return knots_t.size(); }
};

template <class S>
struct PlanRequest {
  S limit_z;
  std::optional<S> q;
  std::size_t depth = 2;
  std::optional<CaseKind> forced_case;
};

// Four-case knot/value planner. values[m-1] is z_m; the exponent in the
// knot formulas is the original index m.
template <class S>
InterpolationPlan<S> plan_case(std::span<const S> values, const PlanRequest<S>& request);

template <class S>
SupOfLines<S> interpolant(const InterpolationPlan<S>& plan) {
  return build_sup_of_lines(plan.knots_t, plan.values_a);
}

}  // namespace wsc

#endif  // WSC_CONVEX_CONSTRUCTION_HPP
