#pragma once

#include <stdexcept>
#include <string>

namespace triwave {

// Error taxonomy. The CLI maps kinds to exit codes: configuration and
// contract problems exit 1, numerical failures exit 2.
enum class ErrorKind {
  validation,   // malformed input, bad config value
  contract,     // caller violated an API precondition
  domain,       // argument outside mathematical domain
  regime,       // asymptotic-regime preconditions unmet
  numeric,      // solver failed to converge / lost accuracy
  singular,     // exactly singular operating point
  degenerate,   // ill-conditioned parameter combination
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string msg)
      : std::runtime_error(std::move(msg)), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

  static bool is_numerical(ErrorKind k) noexcept {
    return k == ErrorKind::numeric || k == ErrorKind::singular ||
           k == ErrorKind::degenerate;
  }

 private:
  ErrorKind kind_;
};

struct ValidationError : Error {
  explicit ValidationError(std::string msg)
      : Error(ErrorKind::validation, std::move(msg)) {}
};
struct ContractError : Error {
  explicit ContractError(std::string msg)
      : Error(ErrorKind::contract, std::move(msg)) {}
};
struct DomainError : Error {
  explicit DomainError(std::string msg)
      : Error(ErrorKind::domain, std::move(msg)) {}
};
struct RegimeError : Error {
  explicit RegimeError(std::string msg)
      : Error(ErrorKind::regime, std::move(msg)) {}
};
struct NumericError : Error {
  NumericError(std::string msg, double last_residual = 0.0,
               double suggested_damping = 0.0)
      : Error(ErrorKind::numeric, std::move(msg)),
        last_residual(last_residual),
        suggested_damping(suggested_damping) {}
  double last_residual;
  double suggested_damping;  // nonzero when a smaller mixing factor may help
};
struct SingularError : Error {
  explicit SingularError(std::string msg)
      : Error(ErrorKind::singular, std::move(msg)) {}
};
struct DegenerateError : Error {
  explicit DegenerateError(std::string msg)
      : Error(ErrorKind::degenerate, std::move(msg)) {}
};

}  // namespace triwave
