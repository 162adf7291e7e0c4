// errors.hpp: exception types shared by all modules.

#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace boson_kinetics {

// Bad input parameters (L = 0, J <= 0, kappa <= 0, ...).
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A formula evaluated outside the region where it is defined
// (out-of-band energy, mu on the wrong side of the band, Delta = 0 expansions).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Time marching did not reach the steady state, or the integrator gave up.
class ConvergenceError : public std::runtime_error {
 public:
  struct ResidualSample {
    double tau;
    double residual;
  };

  ConvergenceError(const std::string& what, std::vector<ResidualSample> history = {},
                   std::vector<double> state = {})
      : std::runtime_error(what), history_(std::move(history)), state_(std::move(state)) {}

  const std::vector<ResidualSample>& history() const noexcept { return history_; }
  // Occupations at the point of failure (empty when not applicable).
  const std::vector<double>& state() const noexcept { return state_; }

 private:
  std::vector<ResidualSample> history_;
  std::vector<double> state_;
};

// Step size fell below the underflow threshold.
class StiffnessError : public ConvergenceError {
 public:
  using ConvergenceError::ConvergenceError;
};

// Configuration text could not be parsed or validated.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace boson_kinetics
