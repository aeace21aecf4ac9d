#pragma once

#include <stdexcept>
#include <string>

namespace ratelab {

// Numerical tolerances used throughout the library. They are collected in
// one record so construction checks, operation contracts and tests agree on
// the same numbers.
struct Tolerances {
  double hermiticity = 1e-12;           // relative, at HermitianOperator construction
  double density_min_eigenvalue = -1e-10;
  double density_trace = 1e-10;
  double spectrum_residual = 1e-9;      // eigendecomposition reconstruction / orthonormality
  double rank_cutoff = 1e-12;           // support detection for matrix_log2 and pseudo-inverses
  double state_norm = 1e-10;
  double schmidt_drop = 1e-12;          // Schmidt coefficients below this are dropped
  double triple_pi_eigenvalue = 1e-10;  // slack around [0,1] for ensemble-triple Pi
  double triple_trace = 1e-9;           // |Tr(Pi rho) - p| at triple construction
  double binary_gap = 1e-6;             // min gap between the two clusters of a binary spectrum
  double binary_spread = 1e-9;          // max spread inside a cluster
  double canonical_edge = 1e-9;         // block eigenvalues within this of {0,1} are edge cases
  double admissible_slack = 1e-8;       // solver-side 0<=K<=I, 0<=Pi<=I checks
  double duality_gap = 1e-6;            // |Tr(X Pi) - lambda0| at an accepted Pi-step
  double traceless = 1e-9;              // |Tr Z| allowed before flagging an internal bug
  double mu_min_eigenvalue = -1e-6;     // abort threshold for the reduction residual state
};

inline constexpr Tolerances kTol{};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Input valid in shape but numerically outside the operation's domain
// (e.g. everything below the rank cutoff).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

class NotBinarySpectrumError : public Error {
 public:
  using Error::Error;
};

class InconsistentEnsembleError : public Error {
 public:
  using Error::Error;
};

class InadmissibleError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

// A condition that is guaranteed analytically failed numerically; indicates
// a bug rather than bad input.
class InternalError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace ratelab
