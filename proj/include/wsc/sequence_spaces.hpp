#ifndef WSC_SEQUENCE_SPACES_HPP
#define WSC_SEQUENCE_SPACES_HPP

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "wsc/error.hpp"
#include "wsc/scalar.hpp"

namespace wsc {

enum class SpaceTag { c0, linf };

template <class S>
struct Run {
  S value;
  std::size_t length = 0;

  bool operator==(const Run&) const = default;
};

// A finitely supported element of c0 or l-infinity. Coordinates past size()
// are zero. Storage is run-length encoded: the vectors built here are sums
// of a few scaled partial-sum blocks, so runs stay short while the support
// can be long.
template <class S>
class TruncatedVector {
 public:
  TruncatedVector() = default;

  explicit TruncatedVector(const std::vector<S>& coords, SpaceTag space = SpaceTag::c0)
      : space_(space) {
    for (const S& c : coords) push(c, 1);
    normalize();
  }

  static TruncatedVector constant(const S& value, std::size_t length,
                                  SpaceTag space = SpaceTag::c0) {
    TruncatedVector v;
    v.space_ = space;
    v.push(value, length);
    v.normalize();
    return v;
  }

  static TruncatedVector from_runs(std::vector<Run<S>> runs, SpaceTag space = SpaceTag::c0) {
    TruncatedVector v;
    v.space_ = space;
    for (auto& r : runs) v.push(std::move(r.value), r.length);
    v.normalize();
    return v;
  }

  // Length of the support prefix; trailing zeros are never stored.
  std::size_t size() const { return size_; }
  bool is_zero() const { return runs_.empty(); }
  SpaceTag space() const { return space_; }
  std::span<const Run<S>> runs() const { return runs_; }

  // 0-based coordinate access; zero past the support.
  S operator[](std::size_t index) const {
    std::size_t offset = 0;
    for (const Run<S>& r : runs_) {
      if (index < offset + r.length) return r.value;
      offset += r.length;
    }
    return S(0);
  }

  std::vector<S> coords() const {
    std::vector<S> out;
    out.reserve(size_);
    for (const Run<S>& r : runs_) out.insert(out.end(), r.length, r.value);
    return out;
  }

  // Equality of elements of the sequence space; the tag is intent only.
  bool operator==(const TruncatedVector& other) const { return runs_ == other.runs_; }

  TruncatedVector scaled(const S& factor) const {
    TruncatedVector v;
    v.space_ = space_;
    if (factor == S(0)) return v;
    v.runs_.reserve(runs_.size());
    for (const Run<S>& r : runs_) v.runs_.push_back({S(r.value * factor), r.length});
    v.size_ = size_;
    return v;
  }

  // alpha * x + beta * y, walking both run lists once.
  static TruncatedVector combine(const S& alpha, const TruncatedVector& x, const S& beta,
                                 const TruncatedVector& y) {
    TruncatedVector out;
    out.space_ = x.space_;
    std::size_t i = 0, j = 0, left_i = 0, left_j = 0;
    if (i < x.runs_.size()) left_i = x.runs_[i].length;
    if (j < y.runs_.size()) left_j = y.runs_[j].length;
    while (i < x.runs_.size() || j < y.runs_.size()) {
      const bool has_x = i < x.runs_.size();
      const bool has_y = j < y.runs_.size();
      std::size_t step;
      S value;
      if (has_x && has_y) {
        step = std::min(left_i, left_j);
        value = alpha * x.runs_[i].value + beta * y.runs_[j].value;
      } else if (has_x) {
        step = left_i;
        value = alpha * x.runs_[i].value;
      } else {
        step = left_j;
        value = beta * y.runs_[j].value;
      }
      out.push(std::move(value), step);
      if (has_x) {
        left_i -= step;
        if (left_i == 0 && ++i < x.runs_.size()) left_i = x.runs_[i].length;
      }
      if (has_y) {
        left_j -= step;
        if (left_j == 0 && ++j < y.runs_.size()) left_j = y.runs_[j].length;
      }
    }
    out.normalize();
    return out;
  }

  friend TruncatedVector operator+(const TruncatedVector& a, const TruncatedVector& b) {
    return combine(S(1), a, S(1), b);
  }
  friend TruncatedVector operator-(const TruncatedVector& a, const TruncatedVector& b) {
    return combine(S(1), a, S(-1), b);
  }
  friend TruncatedVector operator-(const TruncatedVector& a) { return a.scaled(S(-1)); }
  friend TruncatedVector operator*(const S& factor, const TruncatedVector& a) {
    return a.scaled(factor);
  }

 private:
  void push(S value, std::size_t length) {
    if (length == 0) return;
    if (!runs_.empty() && runs_.back().value == value) {
      runs_.back().length += length;
    } else {
      runs_.push_back({std::move(value), length});
    }
  }

  void normalize() {
    while (!runs_.empty() && runs_.back().value == S(0)) runs_.pop_back();
    size_ = 0;
    for (const Run<S>& r : runs_) size_ += r.length;
  }

  std::vector<Run<S>> runs_;
  std::size_t size_ = 0;
  SpaceTag space_ = SpaceTag::c0;
};

template <class S>
S sup_norm(const TruncatedVector<S>& y) {
  S best(0);
  for (const Run<S>& r : y.runs()) best = std::max(best, abs_value(r.value));
  return best;
}

template <class S>
struct GeometricTail {
  S ratio;
  S start;

  bool operator==(const GeometricTail&) const = default;
};

// An l1 representer: explicit head coefficients followed by an optional
// geometric tail start, start*ratio, start*ratio^2, ... with |ratio| < 1.
template <class S>
class DualFunctional {
 public:
  DualFunctional() = default;

  explicit DualFunctional(std::vector<S> head, std::optional<GeometricTail<S>> tail = std::nullopt)
      : head_(std::move(head)), tail_(std::move(tail)) {
    if (tail_ && !(abs_value(tail_->ratio) < S(1))) {
      throw Error(ErrorKind::InvalidInput, "geometric tail ratio must satisfy |ratio| < 1");
    }
    prefix_.assign(1, S(0));
    prefix_.reserve(head_.size() + 1);
    for (const S& c : head_) prefix_.push_back(prefix_.back() + c);
  }

  const std::vector<S>& head() const { return head_; }
  const std::optional<GeometricTail<S>>& tail() const { return tail_; }

  // 0-based coefficient.
  S coefficient(std::size_t index) const {
    if (index < head_.size()) return head_[index];
    if (!tail_) return S(0);
    return tail_->start * ipow(tail_->ratio, index - head_.size());
  }

  // Sum of coefficients begin .. begin+length-1 in closed form.
  S range_sum(std::size_t begin, std::size_t length) const {
    S total(0);
    const std::size_t end = begin + length;
    const std::size_t head_end = std::min(end, head_.size());
    if (begin < head_end) total += prefix_[head_end] - prefix_[begin];
    if (tail_ && end > head_.size()) {
      const std::size_t first = std::max(begin, head_.size()) - head_.size();
      const std::size_t count = end - head_.size() - first;
      const S& r = tail_->ratio;
      // start * r^first * (1 - r^count) / (1 - r)
      total += tail_->start * ipow(r, first) * (S(1) - ipow(r, count)) / (S(1) - r);
    }
    return total;
  }

  S l1_norm() const {
    S total(0);
    for (const S& c : head_) total += abs_value(c);
    if (tail_) total += abs_value(tail_->start) / (S(1) - abs_value(tail_->ratio));
    return total;
  }

  // The functional evaluated on (1, 1, 1, ...).
  S total_sum() const {
    S total = prefix_.back();
    if (tail_) total += tail_->start / (S(1) - tail_->ratio);
    return total;
  }

  DualFunctional scaled(const S& factor) const {
    std::vector<S> head;
    head.reserve(head_.size());
    for (const S& c : head_) head.push_back(c * factor);
    std::optional<GeometricTail<S>> tail;
    if (tail_) tail = GeometricTail<S>{tail_->ratio, tail_->start * factor};
    return DualFunctional(std::move(head), std::move(tail));
  }

  bool operator==(const DualFunctional& other) const {
    return head_ == other.head_ && tail_ == other.tail_;
  }

 private:
  std::vector<S> head_;
  std::optional<GeometricTail<S>> tail_;
  std::vector<S> prefix_{S(0)};
};

template <class S>
S pair(const DualFunctional<S>& f, const TruncatedVector<S>& y) {
  S total(0);
  std::size_t offset = 0;
  for (const Run<S>& r : y.runs()) {
    total += r.value * f.range_sum(offset, r.length);
    offset += r.length;
  }
  return total;
}

// (1/2, 1/4, 1/8, ...): the default probe for the partial-sum family.
template <class S>
DualFunctional<S> canonical_probe() {
  return DualFunctional<S>({ratio<S>(1, 2), ratio<S>(1, 4), ratio<S>(1, 8)},
                           GeometricTail<S>{ratio<S>(1, 2), ratio<S>(1, 16)});
}

// Pairs with the m-th partial sum to 1 + 2^-m: a decreasing counterpart of
// the canonical probe.
template <class S>
DualFunctional<S> decreasing_probe() {
  return DualFunctional<S>({ratio<S>(3, 2)}, GeometricTail<S>{ratio<S>(1, 2), ratio<S>(-1, 4)});
}

enum class FamilyKind { c0_partial_sums, linf_neg_prefix, explicit_list };

const char* to_string(FamilyKind kind);
FamilyKind parse_family_kind(std::string_view text);

template <class S>
struct FamilySpec {
  FamilyKind kind = FamilyKind::c0_partial_sums;
  std::size_t depth = 1;
  std::vector<TruncatedVector<S>> vectors;  // explicit_list only
};

// The m-th member (1-based) of the family, independent of spec.depth for
// the closed-form kinds.
template <class S>
TruncatedVector<S> family_member(const FamilySpec<S>& spec, std::size_t m);

template <class S>
std::vector<TruncatedVector<S>> generate_family(const FamilySpec<S>& spec);

enum class LimitSource { none, single, constant, geometric };

const char* to_string(LimitSource source);

template <class S>
struct LimitEstimate {
  std::optional<S> value;
  LimitSource source = LimitSource::none;
};

// Closed-form limit for value sequences whose trailing gaps are zero or
// geometric. When the probe has a geometric tail its ratio is the one
// accepted; otherwise two equal trailing gap ratios are required.
template <class S>
LimitEstimate<S> extrapolate_limit(std::span<const S> values,
                                   const DualFunctional<S>* probe = nullptr);

template <class S>
struct ProbeScan {
  std::vector<S> values;
  std::optional<S> last_gap;
  LimitEstimate<S> limit;
};

template <class S>
struct ScanReport {
  std::vector<ProbeScan<S>> probes;
  std::optional<S> min_pairwise_norm_gap;  // empty for single-element families
  S gap_floor;
  bool norm_divergent_candidate = false;
};

template <class S>
ScanReport<S> weak_cauchy_scan(std::span<const TruncatedVector<S>> family,
                               std::span<const DualFunctional<S>> probes,
                               const S& gap_floor = ratio<S>(1, 2));

// Distances ||x_n - x_inf|| for n = 1..n_max, x_inf the all-(-1) vector
// truncated to length n_max + 1.
template <class S>
std::vector<S> infimum_gap_demo(std::size_t n_max);

}  // namespace wsc

#endif  // WSC_SEQUENCE_SPACES_HPP
