#include "wsc/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace wsc {

namespace {

template <class S>
S node_coefficient(CaseKind kind, const S& t, const std::optional<S>& q) {
  switch (kind) {
    case CaseKind::NonincLow: return t;
    case CaseKind::NonincHigh: return t / *q;
    case CaseKind::IncrHigh: return -t;
    case CaseKind::IncrLow: return -(t / *q);
  }
  return t;
}

// Bit-exact across platforms: no std distributions.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  template <class S>
  S dyadic_unit() {  // j / 2^20, j in [0, 2^20]
    return ratio<S>(static_cast<std::int64_t>(below((1U << 20) + 1)), 1 << 20);
  }

 private:
  std::mt19937_64 engine_;
};

template <class S>
S lerp(const S& lo, const S& hi, const S& frac) {
  return lo + frac * (hi - lo);
}

template <class S>
bool scalar_leq(const S& lhs, const S& rhs) {
  if constexpr (ScalarTraits<S>::exact) {
    return lhs <= rhs;
  } else {
    const S slack = ScalarTraits<S>::tolerance() * std::max({S(1), abs_value(lhs), abs_value(rhs)});
    return lhs <= rhs + slack;
  }
}

double log2_estimate(const Rational& value) {
  // Leading 53 bits of numerator and denominator carry all the precision a
  // double can hold.
  auto lead = [](const BigInt& x) {
    const long msb = static_cast<long>(boost::multiprecision::msb(x));
    const long drop = std::max(0L, msb - 52);
    return std::log2(BigInt(x >> drop).convert_to<double>()) + static_cast<double>(drop);
  };
  return lead(boost::multiprecision::numerator(value)) -
         lead(boost::multiprecision::denominator(value));
}

double log2_estimate(double value) { return std::log2(value); }

template <class S>
S sample_ray_parameter(Sampler& rng, const std::vector<S>& knots) {
  // The truncated map lives on {0} and [t_depth, inf); only the interval is
  // closed under mixing, so the lower boundary sample is the deepest knot.
  const std::uint64_t pick = rng.below(16);
  if (pick == 0) return knots.back();
  if (pick == 1) return knots.front() * (S(1) + rng.dyadic_unit<S>());
  const std::size_t piece = static_cast<std::size_t>(rng.below(knots.size() - 1));
  return lerp(knots[piece + 1], knots[piece], rng.dyadic_unit<S>());
}

template <class S>
TruncatedVector<S> random_cone_element(Sampler& rng, const HalfSpaceCone<S>& cone,
                                       const TruncatedVector<S>& anchor) {
  const std::size_t length = 1 + static_cast<std::size_t>(rng.below(8));
  std::vector<S> coords;
  for (std::size_t i = 0; i < length; ++i) {
    coords.push_back(S(static_cast<long>(rng.below(7)) - 3));
  }
  TruncatedVector<S> w(coords);
  const S anchor_value = pair(cone.generator, anchor);
  const S beta = ratio<S>(static_cast<std::int64_t>(rng.below(9)), 8);
  // Project onto the boundary hyperplane along the anchor, then push in.
  const S shift = beta - pair(cone.generator, w) / anchor_value;
  return TruncatedVector<S>::combine(S(1), w, shift, anchor);
}

// Shared body of the three convexity checks for any domain point type.
template <class S, class Point, class SampleFn, class MixFn, class MapFn>
ConvexityReport run_convexity(const HalfSpaceCone<S>& cone, const TruncatedVector<S>& anchor,
                              std::size_t trials, std::uint64_t seed, std::size_t depth,
                              SampleFn sample, MixFn mix, MapFn F) {
  if (trials == 0) throw Error(ErrorKind::InvalidInput, "verify_K_convexity needs trials >= 1");
  if (!(pair(cone.generator, anchor) > S(0))) {
    throw Error(ErrorKind::InvalidInput, "epigraph anchor must lie strictly inside the cone");
  }
  ConvexityReport report;
  report.trials = trials;
  report.seed = seed;
  report.depth = depth;
  Sampler rng(seed);
  const std::vector<S> lambdas{S(0), ratio<S>(1, 4), ratio<S>(1, 2), ratio<S>(3, 4), S(1)};
  const DualRay<S> ray{cone.generator};
  const S half = ratio<S>(1, 2);

  for (std::size_t trial = 0; trial < trials; ++trial) {
    const Point x = sample(rng);
    const Point y = sample(rng);
    const TruncatedVector<S> fx = F(x);
    const TruncatedVector<S> fy = F(y);

    for (std::size_t li = 0; li < lambdas.size(); ++li) {
      const S& lambda = lambdas[li];
      const TruncatedVector<S> lhs = F(mix(lambda, x, y));
      const auto rhs = TruncatedVector<S>::combine(lambda, fx, S(1) - lambda, fy);
      ++report.direct_checks;
      if (!dominates(cone, lhs, rhs)) report.direct_violations.push_back({trial, li});
    }

    const TruncatedVector<S> fmid = F(mix(half, x, y));
    for (std::size_t si = 0; si < ray.sample_scales.size(); ++si) {
      const DualFunctional<S> u = ray.generator.scaled(ray.sample_scales[si]);
      const S lhs = pair(u, fmid);
      const S rhs = (pair(u, fx) + pair(u, fy)) * half;
      ++report.scalar_checks;
      if (!scalar_leq(lhs, rhs)) report.scalar_violations.push_back({trial, si});
    }

    const auto ex = fx + random_cone_element(rng, cone, anchor);
    const auto ey = fy + random_cone_element(rng, cone, anchor);
    const auto mid_value = TruncatedVector<S>::combine(half, ex, half, ey);
    ++report.epigraph_checks;
    if (!dominates(cone, fmid, mid_value)) report.epigraph_violations.push_back({trial, 0});
  }
  return report;
}

}  // namespace

template <class S>
Counterexample<S> build_counterexample(const FamilySpec<S>& family, const DualFunctional<S>& probe,
                                       const CounterexampleOptions<S>& options) {
  if (family.depth == 0) throw Error(ErrorKind::EmptyFamily, "family depth must be at least 1");
  if (options.depth < 2) {
    throw Error(ErrorKind::DepthExhausted, "a ray mapping needs at least two knots");
  }
  Counterexample<S> cx;
  cx.raw_values.reserve(family.depth);
  for (std::size_t m = 1; m <= family.depth; ++m) {
    cx.raw_values.push_back(pair(probe, family_member(family, m)));
  }
  cx.raw_limit = extrapolate_limit<S>(cx.raw_values, &probe);
  if (!cx.raw_limit.value) {
    throw Error(ErrorKind::InvalidInput, "probe values show no closed-form limit on this family");
  }
  const RescaledFunctional<S> rescaled =
      rescale_functional(probe, *cx.raw_limit.value, options.target_z);

  std::vector<S> z;
  z.reserve(cx.raw_values.size());
  for (const S& v : cx.raw_values) z.push_back(v * rescaled.scale);

  RayMapping<S>& map = cx.map;
  map.plan = plan_case<S>(z, {options.target_z, options.q, options.depth, options.forced_case});
  map.plan.scale_c = rescaled.scale;
  map.family = family;
  map.probe = probe;
  map.options = options;
  for (std::size_t k = 0; k < map.plan.depth(); ++k) {
    map.members.push_back(family_member(family, map.plan.sub_indices[k]));
    map.node_coefficients.push_back(
        node_coefficient(map.case_kind(), map.plan.knots_t[k], map.plan.case_tag.q));
    map.node_vectors.push_back(map.members.back().scaled(map.node_coefficients.back()));
  }
  cx.cone = HalfSpaceCone<S>{rescaled.functional, ScalarTraits<S>::tolerance()};
  return cx;
}

template <class S>
Counterexample<S> build_counterexample_scanning(FamilySpec<S> family, const DualFunctional<S>& probe,
                                                const CounterexampleOptions<S>& options,
                                                std::size_t terms) {
  constexpr std::size_t kMaxAutoTerms = 4096;
  if (family.kind == FamilyKind::explicit_list) return build_counterexample(family, probe, options);
  if (terms != 0) {
    family.depth = terms;
    return build_counterexample(family, probe, options);
  }
  for (std::size_t n = 64;; n *= 2) {
    family.depth = n;
    try {
      return build_counterexample(family, probe, options);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DepthExhausted || n >= kMaxAutoTerms) throw;
    }
  }
}

template <class S>
TruncatedVector<S> eval_F(const RayMapping<S>& map, const S& r) {
  if (r < S(0)) throw Error(ErrorKind::OutsideDomain, "the ray is r >= 0");
  if (r == S(0)) return TruncatedVector<S>();
  const std::vector<S>& t = map.knots();
  if (r < t.back()) throw Error(ErrorKind::BelowDepth, "r is below the deepest knot");
  if (r == t.back()) return map.node_vectors.back();
  // Pieces are (t[p+1], t[p]]; everything above t[1] follows piece 0.
  auto it = std::partition_point(t.begin(), t.end(), [&](const S& knot) { return !(knot < r); });
  std::size_t j = static_cast<std::size_t>(it - t.begin());
  std::size_t p = j == 0 ? 0 : std::min(j - 1, t.size() - 2);
  const S lambda = (r - t[p]) / (t[p + 1] - t[p]);
  return TruncatedVector<S>::combine(S(1) - lambda, map.node_vectors[p], lambda,
                                     map.node_vectors[p + 1]);
}

template <class S>
TruncatedVector<S> eval_F_deepening(Counterexample<S>& cx, const S& r) {
  const std::size_t ceiling = std::max(cx.map.options.max_depth, cx.map.depth());
  while (r > S(0) && r < cx.map.knots().back() && cx.map.depth() < ceiling) {
    CounterexampleOptions<S> deeper = cx.map.options;
    deeper.depth = std::min(ceiling, cx.map.depth() + 1);
    cx = build_counterexample(cx.map.family, cx.map.probe, deeper);
  }
  return eval_F(cx.map, r);
}

template <class S>
ScalarizationReport scalarization_identity(const RayMapping<S>& map, const HalfSpaceCone<S>& cone,
                                           const std::vector<S>& sample_rs) {
  const SupOfLines<S> g = interpolant(map.plan);
  ScalarizationReport report;
  report.samples = sample_rs.size();
  for (std::size_t i = 0; i < sample_rs.size(); ++i) {
    const S& r = sample_rs[i];
    const S lhs = pair(cone.generator, eval_F(map, r));
    const S rhs = r == S(0) ? S(0) : eval_g(g, r);
    if (!scalar_equal(lhs, rhs)) report.mismatches.push_back(i);
  }
  return report;
}

template <class S>
std::vector<S> log_spaced_samples(const RayMapping<S>& map, std::size_t count) {
  const std::vector<S>& t = map.knots();
  std::vector<double> logs;
  for (const S& knot : t) logs.push_back(log2_estimate(knot));
  std::vector<S> out;
  if (count == 0) return out;
  if (count == 1) return {t.front()};
  const double top = logs.front();
  const double bottom = logs.back();
  for (std::size_t i = 0; i < count; ++i) {
    if (i == 0) {
      out.push_back(t.front());
      continue;
    }
    if (i + 1 == count) {
      out.push_back(t.back());
      continue;
    }
    const double e = top + (bottom - top) * static_cast<double>(i) / static_cast<double>(count - 1);
    std::size_t p = 0;
    while (p + 2 < t.size() && logs[p + 1] > e) ++p;
    // Fraction of the way from t[p+1] up to t[p], computed relative to t[p].
    const double lo = std::exp2(logs[p + 1] - logs[p]);
    const double target = std::exp2(e - logs[p]);
    double frac = (target - lo) / (1.0 - lo);
    frac = std::clamp(frac, 0.0, 1.0);
    const auto j = static_cast<std::int64_t>(std::llround(frac * static_cast<double>(1 << 20)));
    out.push_back(lerp(t[p + 1], t[p], ratio<S>(j, 1 << 20)));
  }
  return out;
}

template <class S>
ConvexityReport verify_K_convexity(const RayMapping<S>& map, const HalfSpaceCone<S>& cone,
                                   std::size_t trials, std::uint64_t seed) {
  const std::vector<S>& knots = map.knots();
  return run_convexity<S, S>(
      cone, map.members.front(), trials, seed, map.depth(),
      [&](Sampler& rng) { return sample_ray_parameter(rng, knots); },
      [](const S& lambda, const S& r, const S& s) { return S(lambda * r + (S(1) - lambda) * s); },
      [&](const S& r) { return eval_F(map, r); });
}

template <class S>
DifferenceQuotientTrace<S> trace_quotients(const std::function<TruncatedVector<S>(const S&)>& F,
                                           const std::vector<S>& ts,
                                           const DualFunctional<S>& generator) {
  DifferenceQuotientTrace<S> trace;
  const TruncatedVector<S> origin = F(S(0));
  for (const S& t : ts) {
    if (!(t > S(0))) throw Error(ErrorKind::InvalidInput, "difference quotients need t > 0");
    trace.ts.push_back(t);
    trace.quotients.push_back(TruncatedVector<S>(F(t) - origin).scaled(S(1) / t));
    trace.scalarized.push_back(pair(generator, trace.quotients.back()));
  }
  const std::size_t n = trace.ts.size();
  if (n >= 2) {
    trace.gaps.assign(n, std::vector<S>(n, S(0)));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const S gap = sup_norm(TruncatedVector<S>(trace.quotients[i] - trace.quotients[j]));
        trace.gaps[i][j] = gap;
        trace.gaps[j][i] = gap;
      }
    }
  }
  return trace;
}

template <class S>
DifferenceQuotientTrace<S> quotient_trace(const RayMapping<S>& map, const HalfSpaceCone<S>& cone,
                                          const std::vector<std::size_t>& ks) {
  std::vector<S> ts;
  for (std::size_t k : ks) {
    if (k == 0 || k > map.depth()) {
      throw Error(ErrorKind::InvalidInput, "knot label outside 1..depth", k);
    }
    ts.push_back(map.knots()[k - 1]);
  }
  DifferenceQuotientTrace<S> trace = trace_quotients<S>(
      [&](const S& r) { return eval_F(map, r); }, ts, cone.generator);
  trace.ks = ks;
  for (std::size_t k : ks) trace.ms.push_back(map.plan.sub_indices[k - 1]);
  return trace;
}

template <class S>
bool assert_divergence(const DifferenceQuotientTrace<S>& trace, const S& gap_floor) {
  if (trace.size() < 2) throw Error(ErrorKind::TooShort, "divergence needs at least two quotients");
  if (!(gap_floor > S(0))) throw Error(ErrorKind::InvalidInput, "gap floor must be positive");
  for (std::size_t i = 0; i < trace.size(); ++i) {
    for (std::size_t j = i + 1; j < trace.size(); ++j) {
      if (trace.gaps[i][j] < gap_floor) return false;
    }
  }
  return true;
}

template <class S>
MonotonicityReport<S> quotient_monotonicity(const RayMapping<S>& map, const HalfSpaceCone<S>& cone,
                                            const std::vector<S>& t_grid) {
  for (std::size_t i = 0; i + 1 < t_grid.size(); ++i) {
    if (t_grid[i] < t_grid[i + 1]) {
      throw Error(ErrorKind::InvalidInput, "t grid must be nonincreasing", i + 2);
    }
  }
  const DifferenceQuotientTrace<S> trace = trace_quotients<S>(
      [&](const S& r) { return eval_F(map, r); }, t_grid, cone.generator);
  MonotonicityReport<S> report;
  report.scalarized = trace.scalarized;
  for (std::size_t i = 0; i + 1 < trace.size(); ++i) {
    // q at the smaller t must sit below q at the larger t.
    if (!dominates(cone, trace.quotients[i + 1], trace.quotients[i])) report.violations.push_back(i);
  }
  return report;
}

template <class S>
HalfSpaceHost<S> HalfSpaceHost<S>::standard(std::size_t dimension) {
  if (dimension == 0) throw Error(ErrorKind::InvalidInput, "dimension must be positive");
  HalfSpaceHost<S> host;
  host.dimension = dimension;
  host.direction_h.assign(dimension, S(0));
  if (dimension >= 4) {
    for (std::size_t i = 0; i < 4; ++i) host.direction_h[i] = ratio<S>(1, 2);
  } else if (dimension >= 2) {
    host.direction_h[0] = ratio<S>(3, 5);
    host.direction_h[1] = ratio<S>(4, 5);
  } else {
    host.direction_h[0] = S(1);
  }
  return host;
}

template <class S>
S HalfSpaceHost<S>::inner(const std::vector<S>& x) const {
  if (x.size() != dimension) throw Error(ErrorKind::InvalidInput, "point has the wrong dimension");
  S total(0);
  for (std::size_t i = 0; i < dimension; ++i) total += x[i] * direction_h[i];
  return total;
}

template <class S>
TruncatedVector<S> ExtendedMapping<S>::operator()(const std::vector<S>& x) const {
  const S r = host.inner(x);
  if (r < S(0)) throw Error(ErrorKind::OutsideDomain, "<x,h> < 0 lies outside the half-space");
  return eval_F(map, r);
}

template <class S>
ExtendedMapping<S> extend_to_halfspace(const RayMapping<S>& map, const HalfSpaceHost<S>& host) {
  if (host.direction_h.size() != host.dimension || host.dimension == 0) {
    throw Error(ErrorKind::InvalidInput, "direction h must have the host dimension");
  }
  S norm2(0);
  for (const S& c : host.direction_h) norm2 += c * c;
  if (!scalar_equal(norm2, S(1))) throw Error(ErrorKind::InvalidInput, "direction h must be a unit vector");
  return {map, host};
}

template <class S>
ConvexityReport verify_K_convexity(const ExtendedMapping<S>& ext, const HalfSpaceCone<S>& cone,
                                   std::size_t trials, std::uint64_t seed) {
  using Point = std::vector<S>;
  const std::vector<S>& knots = ext.map.knots();
  const HalfSpaceHost<S>& host = ext.host;
  auto sample = [&](Sampler& rng) {
    const S r = sample_ray_parameter(rng, knots);
    Point w(host.dimension);
    for (S& c : w) c = ratio<S>(static_cast<std::int64_t>(rng.below(9)) - 4, 4);
    const S along = host.inner(w);
    Point x(host.dimension);
    for (std::size_t i = 0; i < host.dimension; ++i) {
      x[i] = r * host.direction_h[i] + (w[i] - along * host.direction_h[i]);
    }
    return x;
  };
  auto mix = [](const S& lambda, const Point& a, const Point& b) {
    Point out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = lambda * a[i] + (S(1) - lambda) * b[i];
    return out;
  };
  return run_convexity<S, Point>(cone, ext.map.members.front(), trials, seed, ext.map.depth(), sample,
                                 mix, [&](const Point& x) { return ext(x); });
}

#define WSC_INSTANTIATE(S)                                                                        \
  template Counterexample<S> build_counterexample(const FamilySpec<S>&, const DualFunctional<S>&, \
                                                  const CounterexampleOptions<S>&);              \
  template Counterexample<S> build_counterexample_scanning(                                      \
      FamilySpec<S>, const DualFunctional<S>&, const CounterexampleOptions<S>&, std::size_t);    \
  template TruncatedVector<S> eval_F(const RayMapping<S>&, const S&);                            \
  template TruncatedVector<S> eval_F_deepening(Counterexample<S>&, const S&);                    \
  template ScalarizationReport scalarization_identity(const RayMapping<S>&,                      \
                                                      const HalfSpaceCone<S>&,                   \
                                                      const std::vector<S>&);                    \
  template std::vector<S> log_spaced_samples(const RayMapping<S>&, std::size_t);                 \
  template ConvexityReport verify_K_convexity(const RayMapping<S>&, const HalfSpaceCone<S>&,     \
                                              std::size_t, std::uint64_t);                       \
  template DifferenceQuotientTrace<S> trace_quotients(                                           \
      const std::function<TruncatedVector<S>(const S&)>&, const std::vector<S>&,                 \
      const DualFunctional<S>&);                                                                 \
  template DifferenceQuotientTrace<S> quotient_trace(const RayMapping<S>&,                       \
                                                     const HalfSpaceCone<S>&,                    \
                                                     const std::vector<std::size_t>&);           \
  template bool assert_divergence(const DifferenceQuotientTrace<S>&, const S&);                  \
  template MonotonicityReport<S> quotient_monotonicity(const RayMapping<S>&,                     \
                                                       const HalfSpaceCone<S>&,                  \
                                                       const std::vector<S>&);                   \
  template struct HalfSpaceHost<S>;                                                              \
  template struct ExtendedMapping<S>;                                                            \
  template ExtendedMapping<S> extend_to_halfspace(const RayMapping<S>&, const HalfSpaceHost<S>&); \
  template ConvexityReport verify_K_convexity(const ExtendedMapping<S>&, const HalfSpaceCone<S>&, \
                                              std::size_t, std::uint64_t);

WSC_INSTANTIATE(Rational)
WSC_INSTANTIATE(double)

#undef WSC_INSTANTIATE

}  // namespace wsc
