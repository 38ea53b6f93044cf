#ifndef WSC_ERROR_HPP
#define WSC_ERROR_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace wsc {

enum class ErrorKind {
  InvalidInput,
  EmptyFamily,
  MismatchedGenerator,
  NonDecreasingKnots,
  SlopeChainViolation,
  BelowDepth,
  ZeroSlope,
  ZeroLimit,
  BadQ,
  PrefixNotDropped,
  DepthExhausted,
  TooShort,
  OutsideDomain,
  Underflow,
};

const char* to_string(ErrorKind kind);

// Every failure raised by the library. `index` carries the 1-based position
// the error refers to when there is one (e.g. the violated slope pair).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what,
        std::optional<std::size_t> index = std::nullopt)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind),
        index_(index) {}

  ErrorKind kind() const { return kind_; }
  std::optional<std::size_t> index() const { return index_; }

 private:
  ErrorKind kind_;
  std::optional<std::size_t> index_;
};

}  // namespace wsc

#endif  // WSC_ERROR_HPP
