#include "doctest.h"
#include "oracles.hpp"

#include <random>

using namespace wsc;
using oracle::q;
using R = Rational;

namespace {

HalfSpaceCone<R> e1_cone() { return {DualFunctional<R>({R(1)}), R(0)}; }
HalfSpaceCone<R> canonical_cone() { return {canonical_probe<R>(), R(0)}; }

std::vector<TruncatedVector<R>> random_vectors(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::vector<TruncatedVector<R>> out;
  for (int i = 0; i < count; ++i) {
    std::vector<R> c;
    const int len = 1 + static_cast<int>(rng() % 6);
    for (int k = 0; k < len; ++k) c.push_back(R(static_cast<long>(rng() % 9) - 4, 2));
    out.emplace_back(c);
  }
  return out;
}

}  // namespace

TEST_SUITE("cones") {

TEST_CASE("member") {
  CHECK(member(e1_cone(), TruncatedVector<R>(std::vector<R>{R(0), R(5)})));
  CHECK_FALSE(member(e1_cone(), TruncatedVector<R>(std::vector<R>{R(-1)})));
  CHECK(member(canonical_cone(), oracle::ones<R>(3)));
  CHECK(member(canonical_cone(), TruncatedVector<R>()));
}

TEST_CASE("dominates") {
  const auto y2 = oracle::ones<R>(2);
  CHECK(dominates(canonical_cone(), y2, y2));
  CHECK(dominates(canonical_cone(), TruncatedVector<R>(), y2));
  CHECK_FALSE(dominates(canonical_cone(), y2, TruncatedVector<R>()));
}

TEST_CASE("bidual_spot_check") {
  const DualRay<R> ray{canonical_probe<R>()};
  CHECK(bidual_spot_check(canonical_cone(), ray, {TruncatedVector<R>()}).passed());
  const auto ys = generate_family(FamilySpec<R>{FamilyKind::c0_partial_sums, 20, {}});
  const auto report = bidual_spot_check(canonical_cone(), ray, ys);
  CHECK(report.samples == 20);
  CHECK(report.passed());
  const DualRay<R> e1_ray{DualFunctional<R>({R(1)})};
  CHECK(bidual_spot_check(e1_cone(), e1_ray, {TruncatedVector<R>(std::vector<R>{R(-1)})}).passed());
  CHECK(bidual_spot_check(canonical_cone(), ray, random_vectors(3, 200)).passed());

  try {
    bidual_spot_check(canonical_cone(), e1_ray, ys);
    FAIL("expected MismatchedGenerator");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MismatchedGenerator);
  }
}

TEST_CASE("cone axioms on samples") {
  const auto cone = canonical_cone();
  const auto vs = random_vectors(11, 60);
  const std::vector<R> scales{R(0), q("1/3"), R(1), R(7)};
  for (const auto& y : vs) {
    if (!member(cone, y)) continue;
    for (const R& a : scales) CHECK(member(cone, y.scaled(a)));
    for (const auto& w : vs) {
      if (member(cone, w)) CHECK(member(cone, TruncatedVector<R>(y + w)));
    }
  }
}

TEST_CASE("dominates is reflexive and transitive") {
  const auto cone = canonical_cone();
  const auto vs = random_vectors(5, 25);
  for (const auto& a : vs) {
    CHECK(dominates(cone, a, a));
    for (const auto& b : vs) {
      if (!dominates(cone, a, b)) continue;
      for (const auto& c : vs) {
        if (dominates(cone, b, c)) CHECK(dominates(cone, a, c));
      }
    }
  }
}

TEST_CASE("the half-space cone is not pointed") {
  // (1/4, -1/2) pairs to zero against the canonical probe.
  const TruncatedVector<R> w(oracle::qs({"1/4", "-1/2"}));
  REQUIRE(pair(canonical_probe<R>(), w) == 0);
  CHECK_FALSE(w.is_zero());
  CHECK(member(canonical_cone(), w));
  CHECK(member(canonical_cone(), -w));
}

TEST_CASE("float tolerance is relative") {
  const HalfSpaceCone<double> cone{canonical_probe<double>()};
  CHECK(cone.tolerance == std::ldexp(1.0, -40));
  const TruncatedVector<double> boundary(std::vector<double>{0.25, -0.5});
  CHECK(member(cone, boundary));
  CHECK(member(cone, boundary.scaled(1e6)));
  CHECK_FALSE(member(cone, TruncatedVector<double>(std::vector<double>{-1e-6})));
}

}
