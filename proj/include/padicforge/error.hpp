#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pf {

// Mirrors pf_status in padicforge.h; values must stay in sync.
enum class ErrorCode : int {
  kInvalidArgument = 1,
  kNotPrime = 2,
  kMixedModuli = 3,
  kPrecisionShortfall = 4,
  kNotAUnit = 5,
  kBaseNotOneUnit = 6,
  kNotIntegerValued = 7,
  kWrongPrime = 8,
  kDegreeCapExceeded = 9,
  kBitwiseOddPrime = 10,
  kCDivisibleByP = 11,
  kNotClassB = 12,
  kNotClassA = 13,
  kLengthMismatch = 14,
  kSyntaxError = 15,
  kUnknownIdentifier = 16,
  kCapExceeded = 17,
  kNotBijective = 18,
  kNotBinaryModulus = 19,
  kEmptySequence = 20,
  kUncertifiedGenerator = 21,
  kIoError = 22,
};

std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Parse errors carry a 1-based source position.
class SyntaxError : public Error {
 public:
  SyntaxError(ErrorCode code, const std::string& what, int line, int column)
      : Error(code, what + " at " + std::to_string(line) + ":" + std::to_string(column)),
        line_(line),
        column_(column) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace pf
