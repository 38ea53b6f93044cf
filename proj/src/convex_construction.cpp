#include "wsc/convex_construction.hpp"

#include <algorithm>
#include <string>

namespace wsc {

const char* to_string(Direction direction) {
  return direction == Direction::nonincreasing ? "nonincreasing" : "increasing";
}

const char* to_string(CaseKind kind) {
  switch (kind) {
    case CaseKind::NonincLow: return "NonincLow";
    case CaseKind::NonincHigh: return "NonincHigh";
    case CaseKind::IncrHigh: return "IncrHigh";
    case CaseKind::IncrLow: return "IncrLow";
  }
  return "NonincLow";
}

CaseKind parse_case_kind(std::string_view text) {
  if (text == "1" || text == "NonincLow") return CaseKind::NonincLow;
  if (text == "2" || text == "NonincHigh") return CaseKind::NonincHigh;
  if (text == "3" || text == "IncrHigh") return CaseKind::IncrHigh;
  if (text == "4" || text == "IncrLow") return CaseKind::IncrLow;
  throw Error(ErrorKind::InvalidInput, "unknown case '" + std::string(text) + "'");
}

namespace {

template <class S>
S slope_between(const S& t0, const S& a0, const S& t1, const S& a1) {
  return (a1 - a0) / (t1 - t0);
}

template <class S>
bool slope_at_least(const S& lhs, const S& rhs) {
  if constexpr (ScalarTraits<S>::exact) {
    return lhs >= rhs;
  } else {
    const S slack = ScalarTraits<S>::tolerance() * std::max({S(1), abs_value(lhs), abs_value(rhs)});
    return lhs >= rhs - slack;
  }
}

template <class S>
void require_decreasing(std::span<const S> knots) {
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    if (!(knots[i + 1] < knots[i])) {
      throw Error(ErrorKind::NonDecreasingKnots, "knots must be strictly decreasing", i + 2);
    }
  }
}

}  // namespace

template <class S>
SlopeCheck check_slope_chain(std::span<const S> knots, std::span<const S> values) {
  if (knots.size() != values.size() || knots.size() < 2) {
    throw Error(ErrorKind::InvalidInput, "slope chain needs matching knots and values, at least two");
  }
  require_decreasing(knots);
  SlopeCheck check;
  for (std::size_t m = 0; m + 2 < knots.size(); ++m) {
    const S left = slope_between(knots[m], values[m], knots[m + 1], values[m + 1]);
    const S right = slope_between(knots[m + 1], values[m + 1], knots[m + 2], values[m + 2]);
    if (!slope_at_least(left, right)) {
      check.ok = false;
      check.first_violation = m + 1;
      break;
    }
  }
  return check;
}

template <class S>
SupOfLines<S> build_sup_of_lines(std::vector<S> knots, std::vector<S> values) {
  const SlopeCheck check = check_slope_chain<S>(knots, values);
  if (!check.ok) {
    throw Error(ErrorKind::SlopeChainViolation, "secant slopes are not nonincreasing",
                check.first_violation);
  }
  SupOfLines<S> g;
  g.pieces.reserve(knots.size() - 1);
  for (std::size_t m = 0; m + 1 < knots.size(); ++m) {
    const S slope = slope_between(knots[m], values[m], knots[m + 1], values[m + 1]);
    g.pieces.push_back({knots[m], values[m], slope});
  }
  g.knots = std::move(knots);
  g.values = std::move(values);
  return g;
}

template <class S>
S eval_g(const SupOfLines<S>& g, const S& r) {
  if (r < g.knots.back()) {
    throw Error(ErrorKind::BelowDepth, "r is below the deepest knot");
  }
  S best = g.pieces.front()(r);
  for (std::size_t k = 1; k < g.pieces.size(); ++k) best = std::max(best, g.pieces[k](r));
  return best;
}

template <class S>
std::size_t piece_index(const SupOfLines<S>& g, const S& r) {
  if (r < g.knots.back()) {
    throw Error(ErrorKind::BelowDepth, "r is below the deepest knot");
  }
  // First knot index j with knots[j] < r; r then lies in (knots[j], knots[j-1]].
  auto it = std::partition_point(g.knots.begin(), g.knots.end(),
                                 [&](const S& t) { return !(t < r); });
  std::size_t j = static_cast<std::size_t>(it - g.knots.begin());
  if (j == 0) return 0;
  return std::min(j - 1, g.pieces.size() - 1);
}

template <class S>
S eval_g_interval(const SupOfLines<S>& g, const S& r) {
  return g.pieces[piece_index(g, r)](r);
}

template <class S>
Prop41Result<S> build_prop41(std::span<const S> sequence) {
  const std::size_t n = sequence.size();
  if (n < 2) throw Error(ErrorKind::InvalidInput, "the integer-knot construction needs two terms");
  for (std::size_t m = 0; m < n; ++m) {
    if (sequence[m] < S(0)) throw Error(ErrorKind::InvalidInput, "sequence must be nonnegative", m + 1);
    if (m > 0 && sequence[m - 1] < sequence[m]) {
      throw Error(ErrorKind::InvalidInput, "sequence must be nonincreasing", m + 1);
    }
  }
  Prop41Result<S> out;
  out.indices = {1, 2};
  while (true) {
    const std::size_t m0 = out.indices[out.indices.size() - 2];
    const std::size_t m1 = out.indices.back();
    const S& a0 = sequence[m0 - 1];
    const S& a1 = sequence[m1 - 1];
    if (a0 == a1) {
      if (a1 > S(0)) {
        throw Error(ErrorKind::ZeroSlope, "horizontal positive secant has no zero", m1);
      }
      break;
    }
    const S dm = S(static_cast<long>(m1 - m0));
    const S zero = S(static_cast<long>(m0)) - a0 * dm / (a1 - a0);
    out.zero_crossings.push_back(zero);
    const std::uint64_t next = floor_index(zero) + 1;
    if (next > n) break;
    out.indices.push_back(static_cast<std::size_t>(next));
  }
  std::vector<S> knots;
  std::vector<S> values;
  for (auto it = out.indices.rbegin(); it != out.indices.rend(); ++it) {
    knots.push_back(S(static_cast<long>(*it)));
    values.push_back(sequence[*it - 1]);
  }
  out.g = build_sup_of_lines(std::move(knots), std::move(values));
  return out;
}

template <class S>
MonotoneSubsequence extract_monotone(std::span<const S> values) {
  if (values.empty()) throw Error(ErrorKind::InvalidInput, "extract_monotone needs a nonempty list");
  const std::size_t n = values.size();
  std::vector<bool> is_peak(n, false);
  is_peak[n - 1] = true;
  S suffix_max = values[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    if (!(values[i] < suffix_max)) {
      is_peak[i] = true;
      suffix_max = values[i];
    }
  }
  std::vector<std::size_t> peaks;
  for (std::size_t i = 0; i < n; ++i) {
    if (is_peak[i]) peaks.push_back(i + 1);
  }
  std::vector<std::size_t> chain;
  auto first = std::find(is_peak.begin(), is_peak.end(), false);
  if (first != is_peak.end()) {
    std::size_t cur = static_cast<std::size_t>(first - is_peak.begin());
    chain.push_back(cur + 1);
    while (!is_peak[cur]) {
      std::size_t next = cur + 1;
      while (!(values[cur] < values[next])) ++next;
      cur = next;
      chain.push_back(cur + 1);
    }
  }
  if (chain.size() > peaks.size()) return {std::move(chain), Direction::increasing};
  return {std::move(peaks), Direction::nonincreasing};
}

template <class S>
RescaledFunctional<S> rescale_functional(const DualFunctional<S>& probe, const S& raw_limit,
                                         const S& target_z) {
  if (raw_limit == S(0)) {
    throw Error(ErrorKind::ZeroLimit, "probe values tend to zero; no rescaling gives a positive limit");
  }
  if (!(target_z > S(0)) || target_z == S(1)) {
    throw Error(ErrorKind::InvalidInput, "target limit must be positive and different from 1");
  }
  const S c = target_z / raw_limit;
  return {probe.scaled(c), c};
}

namespace {

template <class S>
CaseKind classify(Direction direction, const S& z) {
  if (direction == Direction::nonincreasing) {
    return z < S(1) ? CaseKind::NonincLow : CaseKind::NonincHigh;
  }
  return z > S(1) ? CaseKind::IncrHigh : CaseKind::IncrLow;
}

template <class S>
std::optional<S> resolve_q(CaseKind kind, const S& z, const std::optional<S>& requested) {
  switch (kind) {
    case CaseKind::NonincHigh: {
      S q = requested.value_or(S(2) * z);
      if (!(q > z)) throw Error(ErrorKind::BadQ, "NonincHigh needs q > z");
      return q;
    }
    case CaseKind::IncrLow: {
      S q = requested.value_or(z / S(2));
      if (!(q > S(0) && q < z)) throw Error(ErrorKind::BadQ, "IncrLow needs 0 < q < z");
      return q;
    }
    default:
      return std::nullopt;
  }
}

// Range a term must lie in for its knot sequence to be strictly decreasing
// and positive.
template <class S>
bool usable_term(CaseKind kind, const S& zm, const std::optional<S>& q) {
  switch (kind) {
    case CaseKind::NonincLow: return zm > S(0) && zm < S(1);
    case CaseKind::NonincHigh: return zm > S(0) && zm < *q;
    case CaseKind::IncrHigh: return zm > S(1);
    case CaseKind::IncrLow: return zm >= *q;
  }
  return false;
}

template <class S>
S knot_for(CaseKind kind, const S& zm, std::size_t m, const std::optional<S>& q) {
  switch (kind) {
    case CaseKind::NonincLow: return ipow(zm, m);
    case CaseKind::NonincHigh: return ipow(S(zm / *q), m);
    case CaseKind::IncrHigh: return ipow(S(S(1) / zm), m);
    case CaseKind::IncrLow: return ipow(S(*q / zm), m);
  }
  return S(0);
}

template <class S>
S value_for(CaseKind kind, const S& t, const S& zm, const std::optional<S>& q) {
  switch (kind) {
    case CaseKind::NonincLow: return t * zm;
    case CaseKind::NonincHigh: return t * zm / *q;
    case CaseKind::IncrHigh: return -(t * zm);
    case CaseKind::IncrLow: return -(t * zm / *q);
  }
  return S(0);
}

template <class S>
void check_underflow(const S& t, std::size_t m) {
  if constexpr (!ScalarTraits<S>::exact) {
    if (t < ScalarTraits<S>::underflow_floor()) {
      throw Error(ErrorKind::Underflow, "knot below 2^-960 in float mode; use rational precision", m);
    }
  }
}

}  // namespace

template <class S>
InterpolationPlan<S> plan_case(std::span<const S> values, const PlanRequest<S>& request) {
  const S& z = request.limit_z;
  if (request.depth < 2) throw Error(ErrorKind::DepthExhausted, "a plan needs at least two knots");
  if (!(z > S(0)) || z == S(1)) {
    throw Error(ErrorKind::InvalidInput, "limit z must lie in (0,1) or (1,inf)");
  }
  if (values.empty()) throw Error(ErrorKind::DepthExhausted, "no values supplied");

  InterpolationPlan<S> plan;
  plan.limit_z = z;

  const bool constant =
      std::all_of(values.begin(), values.end(), [&](const S& v) { return v == values.front(); });
  if (constant) {
    if (!scalar_equal(values.front(), z)) {
      throw Error(ErrorKind::InvalidInput, "constant sequence differs from its stated limit");
    }
    plan.constant = true;
    plan.direction = Direction::nonincreasing;
  } else {
    MonotoneSubsequence mono = extract_monotone(values);
    plan.direction = mono.direction;
    plan.sub_indices = std::move(mono.indices);
  }

  const CaseKind kind = classify(plan.direction, z);
  if (request.forced_case && *request.forced_case != kind) {
    throw Error(ErrorKind::InvalidInput,
                std::string("requested case ") + to_string(*request.forced_case) +
                    " does not match the data (" + to_string(plan.direction) + " values, z " +
                    (z < S(1) ? "< 1" : "> 1") + ")");
  }
  plan.case_tag = {kind, resolve_q(kind, z, request.q)};
  const std::optional<S>& q = plan.case_tag.q;

  if (plan.constant) {
    if (!usable_term(kind, z, q)) throw Error(ErrorKind::PrefixNotDropped, "constant value out of range");
    if (values.size() < request.depth) {
      throw Error(ErrorKind::DepthExhausted, "not enough terms for the requested depth");
    }
    for (std::size_t m = 1; m <= request.depth; ++m) {
      plan.sub_indices.push_back(m);
      plan.knots_t.push_back(knot_for(kind, z, m, q));
      check_underflow(plan.knots_t.back(), m);
      plan.values_a.push_back(value_for(kind, plan.knots_t.back(), z, q));
    }
    return plan;
  }

  std::vector<std::size_t> usable;
  if (plan.direction == Direction::nonincreasing) {
    // Repeated values would give a zero selection constant; keep the first
    // of each run.
    for (std::size_t m : plan.sub_indices) {
      if (usable.empty() || values[m - 1] < values[usable.back() - 1]) usable.push_back(m);
    }
  } else {
    usable = plan.sub_indices;
  }
  std::size_t cut = 0;
  for (std::size_t i = 0; i < usable.size(); ++i) {
    if (!usable_term(kind, values[usable[i] - 1], q)) cut = i + 1;
  }
  plan.dropped_prefix = cut;
  usable.erase(usable.begin(), usable.begin() + static_cast<std::ptrdiff_t>(cut));
  if (usable.size() < 3) {
    throw Error(ErrorKind::PrefixNotDropped,
                "fewer than 3 usable terms remain after dropping the out-of-range prefix");
  }

  plan.sub_indices.clear();
  auto take = [&](std::size_t m, S t) {
    check_underflow(t, m);
    plan.values_a.push_back(value_for(kind, t, values[m - 1], q));
    plan.knots_t.push_back(std::move(t));
    plan.sub_indices.push_back(m);
  };
  take(usable[0], knot_for(kind, values[usable[0] - 1], usable[0], q));
  take(usable[1], knot_for(kind, values[usable[1] - 1], usable[1], q));

  const bool knot_test = kind == CaseKind::NonincLow || kind == CaseKind::NonincHigh;
  std::size_t pos = 2;
  while (plan.knots_t.size() < request.depth) {
    const std::size_t k = plan.knots_t.size();
    const S& t_prev = plan.knots_t[k - 2];
    const S& t_cur = plan.knots_t[k - 1];
    const S& a_prev = plan.values_a[k - 2];
    const S& a_cur = plan.values_a[k - 1];
    // Cases 1-2: next knot must satisfy t < C; cases 3-4: next value a > C.
    const S threshold = knot_test ? S((t_prev * a_cur - t_cur * a_prev) / (a_cur - a_prev))
                                  : S((t_cur * a_prev - t_prev * a_cur) / (t_cur - t_prev));
    plan.thresholds.push_back(threshold);
    bool found = false;
    for (; pos < usable.size(); ++pos) {
      const std::size_t m = usable[pos];
      S t = knot_for(kind, values[m - 1], m, q);
      check_underflow(t, m);
      const bool hit = knot_test ? t < threshold : value_for(kind, t, values[m - 1], q) > threshold;
      if (hit) {
        take(m, std::move(t));
        ++pos;
        found = true;
        break;
      }
    }
    if (!found) {
      throw Error(ErrorKind::DepthExhausted,
                  "values ran out after " + std::to_string(plan.knots_t.size()) + " of " +
                      std::to_string(request.depth) + " knots");
    }
  }

  const SlopeCheck check = check_slope_chain<S>(plan.knots_t, plan.values_a);
  if (!check.ok) {
    throw Error(ErrorKind::SlopeChainViolation, "planned knots violate the slope chain",
                check.first_violation);
  }
  return plan;
}

#define WSC_INSTANTIATE(S)                                                                     \
  template SlopeCheck check_slope_chain(std::span<const S>, std::span<const S>);              \
  template SupOfLines<S> build_sup_of_lines(std::vector<S>, std::vector<S>);                  \
  template S eval_g(const SupOfLines<S>&, const S&);                                          \
  template std::size_t piece_index(const SupOfLines<S>&, const S&);                           \
  template S eval_g_interval(const SupOfLines<S>&, const S&);                                 \
  template Prop41Result<S> build_prop41(std::span<const S>);                                  \
  template MonotoneSubsequence extract_monotone(std::span<const S>);                          \
  template RescaledFunctional<S> rescale_functional(const DualFunctional<S>&, const S&,       \
                                                    const S&);                                \
  template InterpolationPlan<S> plan_case(std::span<const S>, const PlanRequest<S>&);

WSC_INSTANTIATE(Rational)
WSC_INSTANTIATE(double)

#undef WSC_INSTANTIATE

}  // namespace wsc
