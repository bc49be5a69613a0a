#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace urnlab {

enum class ErrorKind {
  InvalidSpec,
  DomainError,
  TooLarge,
  SigmaNotPositiveDefinite,
  NotLatticeValued,
  RankDeficient,
  GammaPole,
  BudgetExceeded,
  SupportCapExceeded,
  WindowTooSmall,
  LatticeMismatch,
};

std::string_view to_string(ErrorKind kind);

// Validation failures are caller mistakes; everything else is a numerical guard.
constexpr bool is_validation_error(ErrorKind kind) {
  return kind == ErrorKind::InvalidSpec || kind == ErrorKind::DomainError ||
         kind == ErrorKind::TooLarge;
}

class UrnError : public std::runtime_error {
 public:
  UrnError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace urnlab
