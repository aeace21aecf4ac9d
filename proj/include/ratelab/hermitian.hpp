#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "ratelab/config.hpp"

namespace ratelab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RowMajorMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// --- core types --- //

/// Dense complex matrix certified Hermitian at construction. The stored form
/// is the symmetrization (M + M^dag)/2; inputs whose anti-Hermitian part
/// exceeds the tolerance are rejected.
class HermitianOperator {
 public:
  explicit HermitianOperator(const ComplexMatrix& m);

  static HermitianOperator identity(int dim);
  static HermitianOperator zero(int dim);
  static HermitianOperator diagonal(const std::vector<double>& entries);

  const ComplexMatrix& matrix() const { return mat_; }
  int dim() const { return static_cast<int>(mat_.rows()); }

 private:
  struct AlreadySymmetric {};
  HermitianOperator(ComplexMatrix m, AlreadySymmetric) : mat_(std::move(m)) {}
  ComplexMatrix mat_;
};

/// Positive semidefinite (within tolerance), unit-trace Hermitian operator.
class DensityMatrix {
 public:
  explicit DensityMatrix(HermitianOperator op);
  explicit DensityMatrix(const ComplexMatrix& m) : DensityMatrix(HermitianOperator(m)) {}

  static DensityMatrix maximally_mixed(int dim);
  static DensityMatrix from_diagonal(const std::vector<double>& entries);
  static DensityMatrix pure(const ComplexVector& amplitudes);

  const HermitianOperator& op() const { return op_; }
  const ComplexMatrix& matrix() const { return op_.matrix(); }
  int dim() const { return op_.dim(); }

 private:
  HermitianOperator op_;
};

/// Eigenvalues in ascending order together with the unitary of eigenvectors
/// (one per column, matching the eigenvalue order).
struct Spectrum {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;
};

/// log2 of a density matrix taken on its support; kernel directions map to
/// zero and are reported through support_rank.
struct MatrixLog {
  HermitianOperator value;
  int support_rank;
  int dim;
  bool full_rank() const { return support_rank == dim; }
};

enum class Keep { First, Second };

struct TraceNormMaximizer {
  HermitianOperator h;
  double value;
};

// --- spectral operations --- //

Spectrum eigendecompose(const HermitianOperator& m);
RealVector eigenvalues_of(const HermitianOperator& m);
RealVector eigenvalues_of(const ComplexMatrix& m);

double trace_norm(const HermitianOperator& m);
double operator_norm(const HermitianOperator& m);

MatrixLog matrix_log2(const DensityMatrix& rho, double rank_cutoff = kTol.rank_cutoff);
HermitianOperator matrix_sqrt(const DensityMatrix& rho);

/// Moore-Penrose inverse square root: 1/sqrt(eigenvalue) on the support,
/// zero on the kernel (eigenvalues below the cutoff).
HermitianOperator matrix_inverse_sqrt(const DensityMatrix& rho, double rank_cutoff = kTol.rank_cutoff);

ComplexMatrix commutator(const HermitianOperator& a, const HermitianOperator& b);
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

HermitianOperator partial_trace(const HermitianOperator& m, int dim_first, int dim_second, Keep keep);

/// max_{||H||=1} Tr(H X) = ||X||_1, attained by H = sign(X) with the kernel
/// completed by +1.
TraceNormMaximizer optimal_hamiltonian(const HermitianOperator& x);

// --- dense helpers --- //

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Tr(a b) without forming the product.
Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b);

/// exp(i t h) via the spectral decomposition of h.
ComplexMatrix evolution_unitary(const HermitianOperator& h, double t);

double von_neumann_entropy_bits(const DensityMatrix& rho);

}  // namespace ratelab
