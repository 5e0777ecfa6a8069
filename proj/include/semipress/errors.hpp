#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace semipress {

/// Enumeration or tree construction would exceed the configured word budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point left the declared domain, or a system/point pairing is invalid.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rejected input (bad parameters, failed commutation check, ...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Root finding could not produce a sign change or the system is not expanding.
/// `curve` holds the (t, value) evaluations made before giving up.
class SolverFailure : public std::runtime_error {
 public:
  explicit SolverFailure(const std::string& what, std::vector<std::pair<double, double>> curve = {})
      : std::runtime_error(what), curve(std::move(curve)) {}

  std::vector<std::pair<double, double>> curve;
};

}  // namespace semipress
