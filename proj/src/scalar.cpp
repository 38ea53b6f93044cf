#include "wsc/scalar.hpp"

#include <algorithm>
#include <charconv>
#include <cctype>
#include <limits>
#include <system_error>

#include "wsc/error.hpp"

namespace wsc {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::EmptyFamily: return "EmptyFamily";
    case ErrorKind::MismatchedGenerator: return "MismatchedGenerator";
    case ErrorKind::NonDecreasingKnots: return "NonDecreasingKnots";
    case ErrorKind::SlopeChainViolation: return "SlopeChainViolation";
    case ErrorKind::BelowDepth: return "BelowDepth";
    case ErrorKind::ZeroSlope: return "ZeroSlope";
    case ErrorKind::ZeroLimit: return "ZeroLimit";
    case ErrorKind::BadQ: return "BadQ";
    case ErrorKind::PrefixNotDropped: return "PrefixNotDropped";
    case ErrorKind::DepthExhausted: return "DepthExhausted";
    case ErrorKind::TooShort: return "TooShort";
    case ErrorKind::OutsideDomain: return "OutsideDomain";
    case ErrorKind::Underflow: return "Underflow";
  }
  return "Unknown";
}

namespace {

std::string_view trim(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
    text.remove_prefix(1);
  }
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
    text.remove_suffix(1);
  }
  return text;
}

[[noreturn]] void bad_scalar(std::string_view text) {
  throw Error(ErrorKind::InvalidInput, "malformed scalar '" + std::string(text) + "'");
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

// Boost treats a leading 0 as an octal prefix.
BigInt decimal_digits(std::string_view digits) {
  auto first = digits.find_first_not_of('0');
  if (first == std::string_view::npos) return BigInt(0);
  return BigInt(std::string(digits.substr(first)));
}

BigInt parse_integer(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  if (!all_digits(body)) bad_scalar(text);
  BigInt value = decimal_digits(body);
  return negative ? BigInt(-value) : value;
}

BigInt pow10(unsigned long n) {
  BigInt result = 1;
  BigInt base = 10;
  while (n > 0) {
    if (n & 1UL) result *= base;
    base *= base;
    n >>= 1U;
  }
  return result;
}

Rational parse_decimal(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = body.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = body.substr(e + 1);
    auto [ptr, ec] = std::from_chars(exp_text.data() + (exp_text.starts_with('+') ? 1 : 0),
                                     exp_text.data() + exp_text.size(), exponent);
    if (ec != std::errc() || ptr != exp_text.data() + exp_text.size()) bad_scalar(text);
    body = body.substr(0, e);
  }
  std::string digits;
  std::string_view int_part = body;
  std::string_view frac_part;
  if (auto dot = body.find('.'); dot != std::string_view::npos) {
    int_part = body.substr(0, dot);
    frac_part = body.substr(dot + 1);
  }
  if (int_part.empty() && frac_part.empty()) bad_scalar(text);
  if ((!int_part.empty() && !all_digits(int_part)) ||
      (!frac_part.empty() && !all_digits(frac_part))) {
    bad_scalar(text);
  }
  digits.append(int_part);
  digits.append(frac_part);
  exponent -= static_cast<long>(frac_part.size());
  BigInt mantissa = decimal_digits(digits);
  if (negative) mantissa = -mantissa;
  if (exponent >= 0) {
    return Rational(BigInt(mantissa * pow10(static_cast<unsigned long>(exponent))));
  }
  return Rational(mantissa, pow10(static_cast<unsigned long>(-exponent)));
}

}  // namespace

Rational ScalarTraits<Rational>::parse(std::string_view raw) {
  std::string_view text = trim(raw);
  if (text.empty()) bad_scalar(raw);
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_integer(trim(text.substr(0, slash)));
    BigInt den = parse_integer(trim(text.substr(slash + 1)));
    if (den == 0) throw Error(ErrorKind::InvalidInput, "zero denominator in '" + std::string(raw) + "'");
    return Rational(num, den);
  }
  return parse_decimal(text);
}

std::string ScalarTraits<Rational>::format(const Rational& value) {
  const BigInt num = boost::multiprecision::numerator(value);
  const BigInt den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double ScalarTraits<Rational>::to_double(const Rational& value) {
  return value.convert_to<double>();
}

double ScalarTraits<double>::parse(std::string_view raw) {
  std::string_view text = trim(raw);
  if (text.empty()) bad_scalar(raw);
  if (text.find('/') != std::string_view::npos) {
    return ScalarTraits<Rational>::parse(text).convert_to<double>();
  }
  if (text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) bad_scalar(raw);
  return value;
}

std::string ScalarTraits<double>::format(double value) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) throw Error(ErrorKind::InvalidInput, "cannot format double");
  return std::string(buffer, ptr);
}

Rational ipow(const Rational& base, unsigned long exponent) {
  // Powers of a reduced fraction stay reduced, so no canonicalization pass.
  Rational result;
  mpq_ptr out = result.backend().data();
  mpz_pow_ui(mpq_numref(out), mpq_numref(base.backend().data()), exponent);
  mpz_pow_ui(mpq_denref(out), mpq_denref(base.backend().data()), exponent);
  return result;
}

double ipow(double base, unsigned long exponent) {
  double result = 1.0;
  while (exponent > 0) {
    if (exponent & 1UL) result *= base;
    base *= base;
    exponent >>= 1U;
  }
  return result;
}

std::uint64_t floor_index(const Rational& value) {
  if (value < 0) throw Error(ErrorKind::InvalidInput, "floor_index of a negative value");
  BigInt q = BigInt(boost::multiprecision::numerator(value) / boost::multiprecision::denominator(value));
  if (q > BigInt(std::numeric_limits<std::uint64_t>::max())) {
    throw Error(ErrorKind::InvalidInput, "index overflow");
  }
  return q.convert_to<std::uint64_t>();
}

std::uint64_t floor_index(double value) {
  if (!(value >= 0.0) || value >= 1.8e19) {
    throw Error(ErrorKind::InvalidInput, "floor_index out of range");
  }
  return static_cast<std::uint64_t>(std::floor(value));
}

bool scalar_equal(const Rational& a, const Rational& b) { return a == b; }

bool scalar_equal(double a, double b, double rel) {
  const double scale = std::max({std::abs(a), std::abs(b), std::numeric_limits<double>::min()});
  return std::abs(a - b) <= rel * scale;
}

}  // namespace wsc
