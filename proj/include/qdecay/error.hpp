#ifndef QDECAY_ERROR_HPP
#define QDECAY_ERROR_HPP

#include <stdexcept>
#include <string>

namespace qdecay {

/// Invalid model input (potential, grid, packet, run parameters).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the domain of a pure function (x < 0, E < 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Formula evaluated at a point where it is singular.
class DegeneracyError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Caller broke an ordering contract (e.g. synthesizing before normalizing).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Numerical breakdown: blow-up of an explicit scheme, non-finite values.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Config file problems; carries the offending line (0 when not line-bound).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace qdecay

#endif  // QDECAY_ERROR_HPP
