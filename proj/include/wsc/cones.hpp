#ifndef WSC_CONES_HPP
#define WSC_CONES_HPP

#include <cstddef>
#include <vector>

#include "wsc/sequence_spaces.hpp"

namespace wsc {

// K = { y : generator(y) >= 0 }, the cone whose dual is the single ray
// spanned by the generator. Not pointed once the support exceeds one
// coordinate.
template <class S>
struct HalfSpaceCone {
  DualFunctional<S> generator;
  S tolerance = ScalarTraits<S>::tolerance();
};

template <class S>
struct DualRay {
  DualFunctional<S> generator;
  std::vector<S> sample_scales{S(0), S(1), S(10)};
};

// Boundary counts as inside. In float mode the tolerance is relative to
// ||generator||_1 * ||y||_inf.
template <class S>
bool member(const HalfSpaceCone<S>& cone, const TruncatedVector<S>& y) {
  const S value = pair(cone.generator, y);
  if constexpr (ScalarTraits<S>::exact) {
    return value >= -cone.tolerance;
  } else {
    const S scale = std::max(S(1), cone.generator.l1_norm() * sup_norm(y));
    return value >= -cone.tolerance * scale;
  }
}

// lower <=_K upper
template <class S>
bool dominates(const HalfSpaceCone<S>& cone, const TruncatedVector<S>& lower,
               const TruncatedVector<S>& upper) {
  return member(cone, TruncatedVector<S>(upper - lower));
}

struct BidualReport {
  std::size_t samples = 0;
  std::vector<std::size_t> counterexamples;  // 0-based sample positions
  bool passed() const { return counterexamples.empty(); }
};

// Compares direct membership with the dual description
// { y : z(y) >= 0 for z in K* } sampled at the ray's scales.
template <class S>
BidualReport bidual_spot_check(const HalfSpaceCone<S>& cone, const DualRay<S>& ray,
                               const std::vector<TruncatedVector<S>>& samples) {
  if (!(ray.generator == cone.generator)) {
    throw Error(ErrorKind::MismatchedGenerator, "dual ray and cone use different generators");
  }
  BidualReport report;
  report.samples = samples.size();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const bool direct = member(cone, samples[i]);
    bool dual = true;
    for (const S& lambda : ray.sample_scales) {
      if (lambda < S(0)) throw Error(ErrorKind::InvalidInput, "dual ray scales must be nonnegative");
      HalfSpaceCone<S> scaled{ray.generator.scaled(lambda), cone.tolerance};
      dual = dual && member(scaled, samples[i]);
    }
    if (direct != dual) report.counterexamples.push_back(i);
  }
  return report;
}

}  // namespace wsc

#endif  // WSC_CONES_HPP
