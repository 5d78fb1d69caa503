#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace folia {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand sizes disagree with each other or with an algebra dimension.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A point fell outside the declared domain of a field, chart or action.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Input data violates a structural invariant (antisymmetry, metric
/// nondegeneracy, the superposition counting bound, ...).
class InvariantError : public Error {
 public:
  using Error::Error;
};

/// A superposition rule was evaluated on one of its singular configurations.
class SingularConfigurationError : public Error {
 public:
  using Error::Error;
};

/// A numeric search (rank search, parameter solve) did not succeed.
class SolveError : public Error {
 public:
  using Error::Error;
};

/// An algorithm was asked to handle an input outside its applicability.
class InapplicableError : public Error {
 public:
  using Error::Error;
};

/// Relative singular-value threshold shared by rank and nondegeneracy tests.
inline constexpr double kRankTolerance = 1e-10;

}  // namespace folia
