#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace diffbody {

enum class ErrorKind {
  DegenerateInput,
  EmptyInput,
  DimensionMismatch,
  Unbounded,
  Infeasible,
  BallUnsupported,
  MixedVariantsUnsupported,
  BudgetExceeded,
  OriginNotInterior,
  InvalidQ,
  IllConditioned,
  NotEven,
  NonIntegrable,
  NotOriginSymmetric,
  ConfigInvalid,
  ParseError,
};

constexpr std::string_view error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::Unbounded: return "Unbounded";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::BallUnsupported: return "BallUnsupported";
    case ErrorKind::MixedVariantsUnsupported: return "MixedVariantsUnsupported";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::OriginNotInterior: return "OriginNotInterior";
    case ErrorKind::InvalidQ: return "InvalidQ";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::NotEven: return "NotEven";
    case ErrorKind::NonIntegrable: return "NonIntegrable";
    case ErrorKind::NotOriginSymmetric: return "NotOriginSymmetric";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure in the library surfaces as this type; `kind()` tells callers
/// which contract was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace diffbody
