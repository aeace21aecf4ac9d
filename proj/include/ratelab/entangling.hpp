#pragma once

#include <span>
#include <vector>

#include "ratelab/hermitian.hpp"

namespace ratelab {

/// Pure state of a bipartite system with dimensions (dim_a, dim_b); the
/// amplitude at index j_a * dim_b + j_b belongs to |j_a, j_b>.
class BipartitePureState {
 public:
  BipartitePureState(int dim_a, int dim_b, ComplexVector amplitudes);

  /// Diagonal embedding sum_j sqrt(p_j) |jj> of a Schmidt spectrum;
  /// coefficients must sum to 1 and fit the smaller dimension.
  static BipartitePureState from_schmidt(std::span<const double> coefficients, int dim_a, int dim_b);

  int dim_a() const { return dim_a_; }
  int dim_b() const { return dim_b_; }
  const ComplexVector& amplitudes() const { return amplitudes_; }

  /// Amplitudes as the dim_a x dim_b matrix M(j_a, j_b).
  ComplexMatrix amplitude_matrix() const;

 private:
  int dim_a_;
  int dim_b_;
  ComplexVector amplitudes_;
};

/// Coefficients are probabilities (squared singular values), nonincreasing,
/// summing to 1; the state reconstructs as
/// sum_j sqrt(p_j) left.col(j) (x) right.col(j).
struct SchmidtDecomposition {
  std::vector<double> coefficients;
  ComplexMatrix left;
  ComplexMatrix right;
};

SchmidtDecomposition schmidt_decompose(const BipartitePureState& psi);

double entanglement_entropy(const BipartitePureState& psi);

/// Entangling rate across the (aA)|(Bb) cut for a Hamiltonian h acting on
/// A (x) B. The state is given on the merged cut (dim_a() = a*A,
/// dim_b() = B*b); ancilla_a and ancilla_b say how h embeds.
double entangling_rate(const BipartitePureState& psi, const HermitianOperator& h, int ancilla_a = 1,
                       int ancilla_b = 1);

struct NoAncillaMaximum {
  double gamma;
  HermitianOperator h_opt;
};

/// Maximal rate over unit-norm Hamiltonians for an ancilla-free state:
/// 2 sqrt(F(p)) over the Schmidt spectrum, with the maximizing Hamiltonian.
NoAncillaMaximum gamma_no_ancilla_max(const BipartitePureState& psi);

/// Rate of the binary-spectrum state with top coefficient lambda:
/// 2 sqrt(lambda (1-lambda)) log2(lambda (d-1) / (1-lambda)).
double gamma_lambda(double lambda, int d);

/// Schmidt spectrum (lambda, (1-lambda)/(d-1) repeated d-1 times).
std::vector<double> binary_schmidt_spectrum(double lambda, int d);

struct LambdaOptimum {
  double lambda;
  double gamma;
};

/// Maximize gamma_lambda over [1/2, 1]: coarse grid to bracket, then
/// golden-section refinement to 1e-8 in lambda.
LambdaOptimum optimize_lambda(int d);

/// Residual of the stationarity condition satisfied by a critical point of
/// the binary family: log2(p1) + log2(p2) + 2 (S + 1/ln 2), which vanishes
/// where d/dlambda of the rate is zero.
double binary_stationarity_residual(double lambda, int d);

struct OptimalPair {
  BipartitePureState psi;
  HermitianOperator h;
};

/// Large-d optimal pair: equal superposition of |1,1> and the maximally
/// entangled state on levels 2..d, with the rotation generator between
/// them. The Hamiltonian is dense (d^2 x d^2); intended for moderate d.
OptimalPair optimal_pair_large_d(int d);

struct Figure2Row {
  int d;
  double log2_d;
  double lambda_opt;
  double gamma_d;
  double entropy_bits;
};

std::vector<Figure2Row> figure2_scan(std::span<const int> d_values);

}  // namespace ratelab
