#include "doctest.h"
#include "oracles.hpp"

#include <random>

using namespace wsc;
using oracle::q;
using R = Rational;

TEST_SUITE("sequence_spaces") {

TEST_CASE("pair on partial sums and trivial vectors") {
  const auto f = canonical_probe<R>();
  CHECK(pair(f, oracle::ones<R>(3)) == q("7/8"));
  CHECK(pair(f, TruncatedVector<R>()) == 0);
  const DualFunctional<R> e1({R(1)});
  CHECK(pair(e1, TruncatedVector<R>(std::vector<R>{R(-1)})) == -1);
}

TEST_CASE("pair agrees with coordinate summation") {
  std::mt19937_64 rng(7);
  const std::vector<DualFunctional<R>> fs{
      canonical_probe<R>(), decreasing_probe<R>(),
      DualFunctional<R>({q("1/3"), q("-2"), q("5/7")}, GeometricTail<R>{q("-2/3"), q("3")}),
      DualFunctional<R>({}, GeometricTail<R>{q("9/10"), q("1")})};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<R> coords;
    const int len = static_cast<int>(rng() % 40);
    for (int i = 0; i < len; ++i) {
      // Long runs exercise the run-length paths.
      const R v(static_cast<long>(rng() % 5) - 2, 1 + static_cast<long>(rng() % 3));
      const int rep = 1 + static_cast<int>(rng() % 4);
      for (int k = 0; k < rep; ++k) coords.push_back(v);
    }
    const TruncatedVector<R> y(coords);
    for (const auto& f : fs) CHECK(pair(f, y) == oracle::dense_pair(f, y));
  }
}

TEST_CASE("sup_norm") {
  CHECK(sup_norm(TruncatedVector<R>(oracle::ones<R>(5) - oracle::ones<R>(2))) == 1);
  CHECK(sup_norm(TruncatedVector<R>()) == 0);
  CHECK(sup_norm(TruncatedVector<R>(std::vector<R>{R(-1), R(-1)})) == 1);
}

TEST_CASE("truncated vectors trim zeros and compare by value") {
  const TruncatedVector<R> a(std::vector<R>{R(1), R(0), R(2), R(0), R(0)});
  CHECK(a.size() == 3);
  CHECK(a[1] == 0);
  CHECK(a[10] == 0);
  CHECK(a.runs().size() == 3);
  CHECK(a.coords() == std::vector<R>{R(1), R(0), R(2)});
  CHECK(TruncatedVector<R>(std::vector<R>{R(0), R(0)}).is_zero());
  CHECK(a - a == TruncatedVector<R>());
  CHECK((R(2) * a)[2] == 4);
  CHECK((-a)[0] == -1);
  const auto c = TruncatedVector<R>::constant(R(3), 4);
  CHECK(c.runs().size() == 1);
  CHECK(c.coords() == std::vector<R>(4, R(3)));
  CHECK(TruncatedVector<R>::from_runs({{R(1), 2}, {R(1), 3}, {R(0), 4}}) == oracle::ones<R>(5));
}

TEST_CASE("pair is bilinear") {
  const auto f = canonical_probe<R>();
  const TruncatedVector<R> y(oracle::qs({"1", "-1/2", "3", "3", "0", "2"}));
  const TruncatedVector<R> w(oracle::qs({"0", "5", "-1/3"}));
  const R alpha = q("-3/7");
  const R beta = q("11/5");
  CHECK(pair(f, TruncatedVector<R>::combine(alpha, y, beta, w)) ==
        alpha * pair(f, y) + beta * pair(f, w));
}

TEST_CASE("pairing is bounded by l1 times sup") {
  const FamilySpec<R> spec{FamilyKind::c0_partial_sums, 30, {}};
  const FamilySpec<R> neg{FamilyKind::linf_neg_prefix, 30, {}};
  for (const auto& f : {canonical_probe<R>(), decreasing_probe<R>()}) {
    for (const auto* s : {&spec, &neg}) {
      for (const auto& y : generate_family(*s)) {
        CHECK(abs_value(pair(f, y)) <= f.l1_norm() * sup_norm(y));
      }
    }
  }
}

TEST_CASE("l1 norm and total sum closed forms") {
  const auto f = canonical_probe<R>();
  CHECK(f.l1_norm() == 1);
  CHECK(f.total_sum() == 1);
  const auto d = decreasing_probe<R>();
  CHECK(d.l1_norm() == 2);
  CHECK(d.total_sum() == 1);
  CHECK(f.coefficient(5) == q("1/64"));
  CHECK(f.range_sum(2, 3) == q("1/8") + q("1/16") + q("1/32"));
  CHECK_THROWS_AS(DualFunctional<R>({}, GeometricTail<R>{R(1), R(1)}), Error);
}

TEST_CASE("generate_family") {
  const auto ys = generate_family(FamilySpec<R>{FamilyKind::c0_partial_sums, 3, {}});
  REQUIRE(ys.size() == 3);
  CHECK(ys[0].coords() == std::vector<R>{R(1)});
  CHECK(ys[1].coords() == std::vector<R>{R(1), R(1)});
  CHECK(ys[2].coords() == std::vector<R>{R(1), R(1), R(1)});

  const auto xs = generate_family(FamilySpec<R>{FamilyKind::linf_neg_prefix, 2, {}});
  CHECK(xs[0].coords() == std::vector<R>{R(-1)});
  CHECK(xs[1].coords() == std::vector<R>{R(-1), R(-1)});
  CHECK(xs[1].space() == SpaceTag::linf);

  const TruncatedVector<R> v(oracle::qs({"2", "1/3"}));
  const auto ex = generate_family(FamilySpec<R>{FamilyKind::explicit_list, 1, {v}});
  REQUIRE(ex.size() == 1);
  CHECK(ex[0] == v);

  try {
    generate_family(FamilySpec<R>{FamilyKind::c0_partial_sums, 0, {}});
    FAIL("expected EmptyFamily");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EmptyFamily);
  }
  CHECK_THROWS_AS(generate_family(FamilySpec<R>{FamilyKind::explicit_list, 2, {v}}), Error);
}

TEST_CASE("partial sums are one apart in sup norm") {
  const auto ys = generate_family(FamilySpec<R>{FamilyKind::c0_partial_sums, 40, {}});
  for (std::size_t i = 0; i < ys.size(); ++i) {
    for (std::size_t j = i + 1; j < ys.size(); ++j) {
      CHECK(sup_norm(TruncatedVector<R>(ys[i] - ys[j])) == 1);
    }
  }
}

TEST_CASE("positive probes increase along partial sums") {
  const auto ys = generate_family(FamilySpec<R>{FamilyKind::c0_partial_sums, 40, {}});
  const std::vector<DualFunctional<R>> probes{
      canonical_probe<R>(), DualFunctional<R>({R(3), q("1/5")}, GeometricTail<R>{q("1/3"), q("1/7")})};
  for (const auto& f : probes) {
    for (std::size_t m = 1; m < ys.size(); ++m) CHECK(pair(f, ys[m - 1]) < pair(f, ys[m]));
  }
}

TEST_CASE("weak_cauchy_scan on partial sums") {
  const auto ys = generate_family(FamilySpec<R>{FamilyKind::c0_partial_sums, 10, {}});
  const std::vector<DualFunctional<R>> probes{canonical_probe<R>(), DualFunctional<R>({R(1)})};
  const auto report = weak_cauchy_scan<R>(ys, probes);
  REQUIRE(report.probes.size() == 2);
  for (std::size_t m = 1; m <= 10; ++m) {
    CHECK(report.probes[0].values[m - 1] == R(1) - ipow(R(1, 2), m));
    CHECK(report.probes[1].values[m - 1] == 1);
  }
  CHECK(*report.probes[0].last_gap == q("1/1024"));
  CHECK(*report.probes[0].limit.value == 1);
  CHECK(report.probes[0].limit.source == LimitSource::geometric);
  CHECK(*report.probes[1].limit.value == 1);
  CHECK(report.probes[1].limit.source == LimitSource::constant);
  CHECK(*report.min_pairwise_norm_gap == 1);
  CHECK(report.norm_divergent_candidate);

  const auto tight = weak_cauchy_scan<R>(ys, probes, R(2));
  CHECK_FALSE(tight.norm_divergent_candidate);
}

TEST_CASE("weak_cauchy_scan on a single element") {
  const std::vector<TruncatedVector<R>> one{oracle::ones<R>(2)};
  const std::vector<DualFunctional<R>> probes{canonical_probe<R>()};
  const auto report = weak_cauchy_scan<R>(one, probes);
  CHECK_FALSE(report.min_pairwise_norm_gap.has_value());
  CHECK_FALSE(report.probes[0].last_gap.has_value());
  CHECK(*report.probes[0].limit.value == q("3/4"));
  CHECK(report.probes[0].limit.source == LimitSource::single);
  CHECK_FALSE(report.norm_divergent_candidate);
  CHECK_THROWS_AS(weak_cauchy_scan<R>(std::vector<TruncatedVector<R>>{}, probes), Error);
}

TEST_CASE("extrapolate_limit without a probe needs two equal ratios") {
  const std::vector<R> geo{R(1), q("3/2"), q("7/4"), q("15/8")};
  CHECK(*extrapolate_limit<R>(geo).value == 2);
  const std::vector<R> short_geo{R(1), q("3/2"), q("7/4")};
  CHECK_FALSE(extrapolate_limit<R>(short_geo).value.has_value());
  const std::vector<R> harmonic{R(1), q("1/2"), q("1/3"), q("1/4")};
  CHECK_FALSE(extrapolate_limit<R>(harmonic).value.has_value());
}

TEST_CASE("infimum_gap_demo") {
  CHECK(infimum_gap_demo<R>(3) == std::vector<R>{R(1), R(1), R(1)});
  CHECK(infimum_gap_demo<R>(1) == std::vector<R>{R(1)});
  for (const R& g : infimum_gap_demo<R>(50)) CHECK(g == 1);
  CHECK_THROWS_AS(infimum_gap_demo<R>(0), Error);
}

TEST_CASE("float backend tracks the exact one") {
  const auto f = canonical_probe<double>();
  const auto y = TruncatedVector<double>::constant(1.0, 3);
  CHECK(pair(f, y) == doctest::Approx(0.875));
  CHECK(infimum_gap_demo<double>(5) == std::vector<double>(5, 1.0));
}

}
