#ifndef WSC_SCALAR_HPP
#define WSC_SCALAR_HPP

#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

namespace wsc {

// Exact backend. Expression templates are off so that `auto` and generic
// code see plain values.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                             boost::multiprecision::et_off>;

enum class Precision { Rational, Float64 };

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static constexpr Precision precision = Precision::Rational;
  static constexpr const char* name = "rational";

  // Accepts "p", "p/q", and decimal literals ("-0.125", "1e-3").
  static Rational parse(std::string_view text);
  // "p" or "p/q" in lowest terms.
  static std::string format(const Rational& value);
  static double to_double(const Rational& value);
  static Rational tolerance() { return Rational(0); }
};

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static constexpr Precision precision = Precision::Float64;
  static constexpr const char* name = "float64";

  static double parse(std::string_view text);
  // Shortest decimal that round-trips.
  static std::string format(double value);
  static double to_double(double value) { return value; }
  // 2^-40, applied relative to the magnitudes involved.
  static double tolerance() { return std::ldexp(1.0, -40); }
  // Knots below this are rejected with ErrorKind::Underflow.
  static double underflow_floor() { return std::ldexp(1.0, -960); }
};

template <class S>
S parse_scalar(std::string_view text) {
  return ScalarTraits<S>::parse(text);
}

template <class S>
std::string format_scalar(const S& value) {
  return ScalarTraits<S>::format(value);
}

template <class S>
S abs_value(const S& value) {
  return value < S(0) ? S(-value) : value;
}

template <class S>
S ratio(std::int64_t numerator, std::int64_t denominator) {
  if constexpr (ScalarTraits<S>::exact) {
    return S(numerator, denominator);
  } else {
    return static_cast<S>(numerator) / static_cast<S>(denominator);
  }
}

// value^exponent for nonnegative integer exponents.
Rational ipow(const Rational& base, unsigned long exponent);
double ipow(double base, unsigned long exponent);

// floor(value) as an unsigned integer; value must be nonnegative.
std::uint64_t floor_index(const Rational& value);
std::uint64_t floor_index(double value);

// Equality in the backend's own sense: exact for rationals, relative
// tolerance for floats.
bool scalar_equal(const Rational& a, const Rational& b);
bool scalar_equal(double a, double b, double rel = 1e-12);

}  // namespace wsc

#endif  // WSC_SCALAR_HPP
