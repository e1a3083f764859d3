#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fracepi {

// Invalid input: parameters, orders, configs. Maps to CLI exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The evaluation strategy could not certify the requested accuracy.
class AccuracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Solver state left the finite/bounded region. Maps to CLI exit code 2.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(std::size_t node, double time, const std::string& what)
      : std::runtime_error(what), node_(node), time_(time) {}

  std::size_t node() const noexcept { return node_; }
  double time() const noexcept { return time_; }

 private:
  std::size_t node_;
  double time_;
};

}  // namespace fracepi
