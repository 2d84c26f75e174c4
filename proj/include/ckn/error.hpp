#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ckn {

enum class ErrorKind {
  InvalidParameter,
  NonConvergence,
  DivergenceSuspected,
  ParseError,
  SingularAtOrigin,
  DecayViolation,
  DegenerateDenominator,
  ZeroFunction,
  EigensolveFailure,
  BudgetExceeded,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::DivergenceSuspected: return "DivergenceSuspected";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::SingularAtOrigin: return "SingularAtOrigin";
    case ErrorKind::DecayViolation: return "DecayViolation";
    case ErrorKind::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorKind::ZeroFunction: return "ZeroFunction";
    case ErrorKind::EigensolveFailure: return "EigensolveFailure";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
  }
  return "Unknown";
}

// Single exception type for the library; callers dispatch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  // NonConvergence and DivergenceSuspected are both quadrature failures.
  bool is_quadrature_failure() const noexcept {
    return kind_ == ErrorKind::NonConvergence || kind_ == ErrorKind::DivergenceSuspected;
  }

 private:
  ErrorKind kind_;
};

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) throw Error(kind, what);
}

}  // namespace ckn
