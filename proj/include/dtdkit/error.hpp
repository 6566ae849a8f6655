#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dtdkit {

enum class ErrorCode {
  parse_error,
  undeclared_element,
  not_well_formed,
  not_prime,
  empty_language,
  alphabet_mismatch,
  not_reduced,
  not_sequential,
  not_balanced_form,
  not_dyck_subset,
  not_dyck_prime_subset,
  not_minimal,
  budget_exceeded,
  internal,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::undeclared_element: return "UndeclaredElement";
    case ErrorCode::not_well_formed: return "NotWellFormed";
    case ErrorCode::not_prime: return "NotPrime";
    case ErrorCode::empty_language: return "EmptyLanguage";
    case ErrorCode::alphabet_mismatch: return "AlphabetMismatch";
    case ErrorCode::not_reduced: return "NotReduced";
    case ErrorCode::not_sequential: return "NotSequential";
    case ErrorCode::not_balanced_form: return "NotBalancedForm";
    case ErrorCode::not_dyck_subset: return "NotDyckSubset";
    case ErrorCode::not_dyck_prime_subset: return "NotDyckPrimeSubset";
    case ErrorCode::not_minimal: return "NotMinimal";
    case ErrorCode::budget_exceeded: return "BudgetExceeded";
    case ErrorCode::internal: return "InternalError";
  }
  return "Error";
}

/// Every failure raised by the library. The code identifies the contract that
/// was violated; the message is meant for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), message_(message) {}

  ErrorCode code() const noexcept { return code_; }
  /// The message without the code prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

/// Position inside a text input, 1-based.
struct SourcePos {
  std::size_t line = 1;
  std::size_t column = 1;
};

inline Error parse_error(SourcePos pos, const std::string& what) {
  return Error(ErrorCode::parse_error,
               std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + what);
}

}  // namespace dtdkit
