#pragma once

#include <stdexcept>
#include <string>

namespace fsgrowth {

/// Invalid input: geometry, parameters, configuration, preconditions.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical solve failed or a runtime invariant broke during a solve.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// det F too small to invert.
class SingularDeformation : public SolverError {
 public:
  using SolverError::SolverError;
};

/// Growth metric left its admissible range (g <= 0, or below the working floor).
class GrowthBoundViolation : public SolverError {
 public:
  using SolverError::SolverError;
};

/// Zero-Dirichlet Stokes data whose divergence source does not integrate to zero.
class HiddenConditionViolation : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

}  // namespace fsgrowth
