#ifndef WSC_TESTS_ORACLES_HPP
#define WSC_TESTS_ORACLES_HPP

// Independent reference values and helpers shared by the unit and
// acceptance tests. Frozen numbers were produced by a separate Fraction
// implementation of the selection recurrence, not by this library.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "wsc/divergence.hpp"

namespace wsc::oracle {

// Coordinate-by-coordinate pairing, bypassing the functional's closed-form
// range sums.
template <class S>
S dense_pair(const DualFunctional<S>& f, const TruncatedVector<S>& y) {
  S total(0);
  const std::vector<S> c = y.coords();
  for (std::size_t i = 0; i < c.size(); ++i) total += f.coefficient(i) * c[i];
  return total;
}

template <class S>
TruncatedVector<S> ones(std::size_t m) {
  return TruncatedVector<S>(std::vector<S>(m, S(1)));
}

inline Rational q(const char* text) { return parse_scalar<Rational>(text); }

inline std::vector<Rational> qs(std::initializer_list<const char*> texts) {
  std::vector<Rational> out;
  for (const char* t : texts) out.push_back(q(t));
  return out;
}

// One shipped instance per case on the partial-sum family.
template <class S>
struct Instance {
  const char* name;
  CaseKind kind;
  DualFunctional<S> probe;
  S target_z;
  std::optional<S> q;
};

template <class S>
std::vector<Instance<S>> shipped_instances() {
  return {
      {"case1 decreasing to 1/2", CaseKind::NonincLow, decreasing_probe<S>(), ratio<S>(1, 2), {}},
      {"case2 decreasing to 2", CaseKind::NonincHigh, decreasing_probe<S>(), S(2), {}},
      {"case3 increasing to 2", CaseKind::IncrHigh, canonical_probe<S>(), S(2), {}},
      {"case4 increasing to 1/2", CaseKind::IncrLow, canonical_probe<S>(), ratio<S>(1, 2),
       ratio<S>(1, 4)},
  };
}

template <class S>
Counterexample<S> build_instance(const Instance<S>& inst, std::size_t depth, std::size_t terms) {
  FamilySpec<S> family{FamilyKind::c0_partial_sums, terms, {}};
  CounterexampleOptions<S> options;
  options.target_z = inst.target_z;
  options.q = inst.q;
  options.depth = depth;
  options.forced_case = inst.kind;
  return build_counterexample(family, inst.probe, options);
}

// Selected indices at depth 12, one list per case.
inline const std::vector<std::size_t> kIndicesCase1{1, 2, 4, 7, 12, 20, 33, 54, 88, 143, 232, 376};
inline const std::vector<std::size_t> kIndicesCase2 = kIndicesCase1;
inline const std::vector<std::size_t> kIndicesCase3{2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233, 377};
inline const std::vector<std::size_t> kIndicesCase4{1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233};

inline const std::vector<std::size_t>& frozen_indices(CaseKind kind) {
  switch (kind) {
    case CaseKind::NonincLow: return kIndicesCase1;
    case CaseKind::NonincHigh: return kIndicesCase2;
    case CaseKind::IncrHigh: return kIndicesCase3;
    case CaseKind::IncrLow: return kIndicesCase4;
  }
  return kIndicesCase1;
}

// First four knots and values per case.
inline std::vector<Rational> frozen_knots(CaseKind kind) {
  switch (kind) {
    case CaseKind::NonincLow:
    case CaseKind::NonincHigh:
      return qs({"3/4", "25/64", "83521/1048576", "594467302491009/72057594037927936"});
    case CaseKind::IncrHigh:
      return qs({"4/9", "64/343", "1048576/28629151", "72057594037927936/17878103347812890625"});
    case CaseKind::IncrLow:
      return qs({"1", "4/9", "64/343", "1048576/28629151"});
  }
  return {};
}

inline std::vector<Rational> frozen_values(CaseKind kind) {
  switch (kind) {
    case CaseKind::NonincLow:
    case CaseKind::NonincHigh:
      return qs({"9/16", "125/512", "1419857/33554432",
                 "76686282021340161/18446744073709551616"});
    case CaseKind::IncrHigh:
      return qs({"-2/3", "-16/49", "-65536/923521", "-562949953421312/70110209207109375"});
    case CaseKind::IncrLow:
      return qs({"-1", "-2/3", "-16/49", "-65536/923521"});
  }
  return {};
}

}  // namespace wsc::oracle

#endif  // WSC_TESTS_ORACLES_HPP
