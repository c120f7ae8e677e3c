#pragma once

#include <stdexcept>
#include <string>

namespace reilly {

/// Caller broke a documented precondition (dimension mismatch, empty input, ...).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A jet primitive was evaluated where it is singular (division by ~0, sqrt of a
/// non-positive value, ...).
class DomainError : public std::runtime_error {
 public:
  DomainError(std::string primitive, double argument, std::string where = {});

  const std::string& primitive() const noexcept { return primitive_; }
  double argument() const noexcept { return argument_; }
  const std::string& where() const noexcept { return where_; }

 private:
  std::string primitive_;
  double argument_;
  std::string where_;
};

class SingularMetric : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A theorem or formula was invoked on a field that does not satisfy its hypotheses.
class HypothesisViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unknown catalog id, field name, theorem id, ...
class UnknownName : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class EigenSolveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace reilly
