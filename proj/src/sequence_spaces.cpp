#include "wsc/sequence_spaces.hpp"

#include <string>

namespace wsc {

const char* to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::c0_partial_sums: return "c0_partial_sums";
    case FamilyKind::linf_neg_prefix: return "linf_neg_prefix";
    case FamilyKind::explicit_list: return "explicit";
  }
  return "unknown";
}

FamilyKind parse_family_kind(std::string_view text) {
  std::string key(text);
  for (char& c : key) {
    if (c == '-') c = '_';
  }
  if (key == "c0_partial_sums") return FamilyKind::c0_partial_sums;
  if (key == "linf_neg_prefix") return FamilyKind::linf_neg_prefix;
  if (key == "explicit") return FamilyKind::explicit_list;
  throw Error(ErrorKind::InvalidInput, "unknown family kind '" + std::string(text) + "'");
}

const char* to_string(LimitSource source) {
  switch (source) {
    case LimitSource::none: return "none";
    case LimitSource::single: return "single";
    case LimitSource::constant: return "constant";
    case LimitSource::geometric: return "geometric";
  }
  return "none";
}

template <class S>
TruncatedVector<S> family_member(const FamilySpec<S>& spec, std::size_t m) {
  if (m == 0) throw Error(ErrorKind::InvalidInput, "family members are 1-based");
  switch (spec.kind) {
    case FamilyKind::c0_partial_sums:
      return TruncatedVector<S>::constant(S(1), m, SpaceTag::c0);
    case FamilyKind::linf_neg_prefix:
      return TruncatedVector<S>::constant(S(-1), m, SpaceTag::linf);
    case FamilyKind::explicit_list:
      if (m > spec.vectors.size()) {
        throw Error(ErrorKind::DepthExhausted, "explicit family has only " +
                                                   std::to_string(spec.vectors.size()) + " members");
      }
      return spec.vectors[m - 1];
  }
  throw Error(ErrorKind::InvalidInput, "unknown family kind");
}

template <class S>
std::vector<TruncatedVector<S>> generate_family(const FamilySpec<S>& spec) {
  if (spec.depth == 0) throw Error(ErrorKind::EmptyFamily, "family depth must be at least 1");
  if (spec.kind == FamilyKind::explicit_list && spec.depth > spec.vectors.size()) {
    throw Error(ErrorKind::InvalidInput, "explicit family shorter than its depth");
  }
  std::vector<TruncatedVector<S>> out;
  out.reserve(spec.depth);
  for (std::size_t m = 1; m <= spec.depth; ++m) out.push_back(family_member(spec, m));
  return out;
}

namespace {

template <class S>
bool same(const S& a, const S& b) {
  if constexpr (ScalarTraits<S>::exact) {
    return a == b;
  } else {
    return scalar_equal(a, b, 1e-9);
  }
}

}  // namespace

template <class S>
LimitEstimate<S> extrapolate_limit(std::span<const S> values, const DualFunctional<S>* probe) {
  LimitEstimate<S> out;
  const std::size_t n = values.size();
  if (n == 0) return out;
  if (n == 1) {
    out.value = values[0];
    out.source = LimitSource::single;
    return out;
  }
  const S last_gap = values[n - 1] - values[n - 2];
  if (last_gap == S(0)) {
    if (n == 2 || values[n - 2] == values[n - 3]) {
      out.value = values[n - 1];
      out.source = LimitSource::constant;
    }
    return out;
  }
  if (n < 3) return out;
  const S prev_gap = values[n - 2] - values[n - 3];
  if (prev_gap == S(0)) return out;
  const S r = last_gap / prev_gap;
  if (!(abs_value(r) < S(1))) return out;

  bool accepted = false;
  if (probe && probe->tail() && same(r, probe->tail()->ratio)) {
    accepted = true;
  } else if (n >= 4) {
    const S older_gap = values[n - 3] - values[n - 4];
    accepted = older_gap != S(0) && same(S(prev_gap / older_gap), r);
  }
  if (!accepted) return out;
  const S rho = (probe && probe->tail() && same(r, probe->tail()->ratio)) ? probe->tail()->ratio : r;
  out.value = values[n - 1] + last_gap * rho / (S(1) - rho);
  out.source = LimitSource::geometric;
  return out;
}

template <class S>
ScanReport<S> weak_cauchy_scan(std::span<const TruncatedVector<S>> family,
                               std::span<const DualFunctional<S>> probes, const S& gap_floor) {
  if (family.empty()) throw Error(ErrorKind::EmptyFamily, "weak_cauchy_scan needs a nonempty family");
  ScanReport<S> report;
  report.gap_floor = gap_floor;
  for (const DualFunctional<S>& probe : probes) {
    ProbeScan<S> scan;
    scan.values.reserve(family.size());
    for (const TruncatedVector<S>& y : family) scan.values.push_back(pair(probe, y));
    if (scan.values.size() >= 2) {
      scan.last_gap = abs_value(S(scan.values.back() - scan.values[scan.values.size() - 2]));
    }
    scan.limit = extrapolate_limit<S>(scan.values, &probe);
    report.probes.push_back(std::move(scan));
  }
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (std::size_t j = i + 1; j < family.size(); ++j) {
      const S gap = sup_norm(TruncatedVector<S>(family[i] - family[j]));
      if (!report.min_pairwise_norm_gap || gap < *report.min_pairwise_norm_gap) {
        report.min_pairwise_norm_gap = gap;
      }
    }
  }
  report.norm_divergent_candidate =
      report.min_pairwise_norm_gap && !(*report.min_pairwise_norm_gap < gap_floor);
  return report;
}

template <class S>
std::vector<S> infimum_gap_demo(std::size_t n_max) {
  if (n_max == 0) throw Error(ErrorKind::InvalidInput, "n_max must be at least 1");
  const auto infimum = TruncatedVector<S>::constant(S(-1), n_max + 1, SpaceTag::linf);
  std::vector<S> out;
  out.reserve(n_max);
  for (std::size_t n = 1; n <= n_max; ++n) {
    const auto x_n = TruncatedVector<S>::constant(S(-1), n, SpaceTag::linf);
    out.push_back(sup_norm(TruncatedVector<S>(x_n - infimum)));
  }
  return out;
}

#define WSC_INSTANTIATE(S)                                                                      \
  template TruncatedVector<S> family_member(const FamilySpec<S>&, std::size_t);                \
  template std::vector<TruncatedVector<S>> generate_family(const FamilySpec<S>&);              \
  template LimitEstimate<S> extrapolate_limit(std::span<const S>, const DualFunctional<S>*);   \
  template ScanReport<S> weak_cauchy_scan(std::span<const TruncatedVector<S>>,                 \
                                          std::span<const DualFunctional<S>>, const S&);       \
  template std::vector<S> infimum_gap_demo(std::size_t);

WSC_INSTANTIATE(Rational)
WSC_INSTANTIATE(double)

#undef WSC_INSTANTIATE

}  // namespace wsc
