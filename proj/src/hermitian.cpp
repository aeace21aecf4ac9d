#include "ratelab/hermitian.hpp"

#include <cmath>
#include <sstream>

#include "ratelab/scalars.hpp"

namespace ratelab {

namespace {

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    std::ostringstream os;
    os << what << ": expected a nonempty square matrix, got " << m.rows() << "x" << m.cols();
    throw DimensionError(os.str());
  }
}

void require_finite(const ComplexMatrix& m, const char* what) {
  if (!m.allFinite()) throw DegenerateInputError(std::string(what) + ": matrix has NaN/Inf entries");
}

}  // namespace

// --- HermitianOperator --- //

HermitianOperator::HermitianOperator(const ComplexMatrix& m) {
  require_square(m, "HermitianOperator");
  require_finite(m, "HermitianOperator");
  const double scale = 1.0 + m.cwiseAbs().maxCoeff();
  const double defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (defect > kTol.hermiticity * scale) {
    std::ostringstream os;
    os << "HermitianOperator: max|M - M^dag| = " << defect << " exceeds " << kTol.hermiticity * scale;
    throw DegenerateInputError(os.str());
  }
  mat_ = 0.5 * (m + m.adjoint());
}

HermitianOperator HermitianOperator::identity(int dim) {
  return HermitianOperator(ComplexMatrix::Identity(dim, dim), AlreadySymmetric{});
}

HermitianOperator HermitianOperator::zero(int dim) {
  return HermitianOperator(ComplexMatrix::Zero(dim, dim), AlreadySymmetric{});
}

HermitianOperator HermitianOperator::diagonal(const std::vector<double>& entries) {
  const int n = static_cast<int>(entries.size());
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = entries[i];
  return HermitianOperator(std::move(m), AlreadySymmetric{});
}

// --- DensityMatrix --- //

DensityMatrix::DensityMatrix(HermitianOperator op) : op_(std::move(op)) {
  const double tr = op_.matrix().trace().real();
  if (std::abs(tr - 1.0) > kTol.density_trace) {
    std::ostringstream os;
    os << "DensityMatrix: trace = " << tr << ", expected 1 within " << kTol.density_trace;
    throw DegenerateInputError(os.str());
  }
  const RealVector ev = eigenvalues_of(op_);
  if (ev(0) < kTol.density_min_eigenvalue) {
    std::ostringstream os;
    os << "DensityMatrix: smallest eigenvalue " << ev(0) << " below " << kTol.density_min_eigenvalue;
    throw DegenerateInputError(os.str());
  }
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  return DensityMatrix(HermitianOperator(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim)));
}

DensityMatrix DensityMatrix::from_diagonal(const std::vector<double>& entries) {
  return DensityMatrix(HermitianOperator::diagonal(entries));
}

DensityMatrix DensityMatrix::pure(const ComplexVector& amplitudes) {
  ComplexVector v = amplitudes / amplitudes.norm();
  return DensityMatrix(HermitianOperator(v * v.adjoint()));
}

// --- spectral operations --- //

Spectrum eigendecompose(const HermitianOperator& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m.matrix());
  const double scale = std::max(1.0, m.matrix().norm());
  if (solver.info() != Eigen::Success) {
    throw SolverError("eigendecompose: solver did not converge, input norm " + std::to_string(scale));
  }
  Spectrum s{solver.eigenvalues(), solver.eigenvectors()};
  const double recon = (s.eigenvectors * s.eigenvalues.asDiagonal() * s.eigenvectors.adjoint() - m.matrix()).norm();
  if (recon > kTol.spectrum_residual * scale) {
    throw InternalError("eigendecompose: reconstruction residual " + std::to_string(recon));
  }
  const int n = m.dim();
  const double ortho = (s.eigenvectors.adjoint() * s.eigenvectors - ComplexMatrix::Identity(n, n)).norm();
  if (ortho > kTol.spectrum_residual) {
    throw InternalError("eigendecompose: orthonormality residual " + std::to_string(ortho));
  }
  return s;
}

RealVector eigenvalues_of(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw SolverError("eigenvalues_of: solver did not converge");
  return solver.eigenvalues();
}

RealVector eigenvalues_of(const HermitianOperator& m) { return eigenvalues_of(m.matrix()); }

double trace_norm(const HermitianOperator& m) { return eigenvalues_of(m).cwiseAbs().sum(); }

double operator_norm(const HermitianOperator& m) {
  const RealVector ev = eigenvalues_of(m);
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

MatrixLog matrix_log2(const DensityMatrix& rho, double rank_cutoff) {
  if (rank_cutoff <= 0.0) throw DegenerateInputError("matrix_log2: rank_cutoff must be positive");
  const Spectrum s = eigendecompose(rho.op());
  const int n = rho.dim();
  RealVector mapped(n);
  int rank = 0;
  for (int i = 0; i < n; ++i) {
    if (s.eigenvalues(i) > rank_cutoff) {
      mapped(i) = std::log2(s.eigenvalues(i));
      ++rank;
    } else {
      mapped(i) = 0.0;
    }
  }
  if (rank == 0) throw DegenerateInputError("matrix_log2: all eigenvalues below the rank cutoff");
  ComplexMatrix out = s.eigenvectors * mapped.asDiagonal() * s.eigenvectors.adjoint();
  return {HermitianOperator(0.5 * (out + out.adjoint())), rank, n};
}

HermitianOperator matrix_sqrt(const DensityMatrix& rho) {
  const Spectrum s = eigendecompose(rho.op());
  const int n = rho.dim();
  RealVector mapped(n);
  for (int i = 0; i < n; ++i) {
    mapped(i) = s.eigenvalues(i) > kTol.rank_cutoff ? std::sqrt(s.eigenvalues(i)) : 0.0;
  }
  ComplexMatrix out = s.eigenvectors * mapped.asDiagonal() * s.eigenvectors.adjoint();
  return HermitianOperator(0.5 * (out + out.adjoint()));
}

HermitianOperator matrix_inverse_sqrt(const DensityMatrix& rho, double rank_cutoff) {
  const Spectrum s = eigendecompose(rho.op());
  const int n = rho.dim();
  RealVector mapped(n);
  for (int i = 0; i < n; ++i) {
    mapped(i) = s.eigenvalues(i) > rank_cutoff ? 1.0 / std::sqrt(s.eigenvalues(i)) : 0.0;
  }
  ComplexMatrix out = s.eigenvectors * mapped.asDiagonal() * s.eigenvectors.adjoint();
  return HermitianOperator(0.5 * (out + out.adjoint()));
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("commutator: dimension mismatch");
  }
  return a * b - b * a;
}

ComplexMatrix commutator(const HermitianOperator& a, const HermitianOperator& b) {
  return commutator(a.matrix(), b.matrix());
}

HermitianOperator partial_trace(const HermitianOperator& m, int dim_first, int dim_second, Keep keep) {
  if (dim_first <= 0 || dim_second <= 0 || dim_first * dim_second != m.dim()) {
    std::ostringstream os;
    os << "partial_trace: dim " << m.dim() << " does not factor as " << dim_first << "*" << dim_second;
    throw DimensionError(os.str());
  }
  const ComplexMatrix& src = m.matrix();
  if (keep == Keep::First) {
    ComplexMatrix out = ComplexMatrix::Zero(dim_first, dim_first);
    for (int i = 0; i < dim_first; ++i)
      for (int j = 0; j < dim_first; ++j)
        for (int k = 0; k < dim_second; ++k) out(i, j) += src(i * dim_second + k, j * dim_second + k);
    return HermitianOperator(0.5 * (out + out.adjoint()));
  }
  ComplexMatrix out = ComplexMatrix::Zero(dim_second, dim_second);
  for (int i = 0; i < dim_second; ++i)
    for (int j = 0; j < dim_second; ++j)
      for (int k = 0; k < dim_first; ++k) out(i, j) += src(k * dim_second + i, k * dim_second + j);
  return HermitianOperator(0.5 * (out + out.adjoint()));
}

TraceNormMaximizer optimal_hamiltonian(const HermitianOperator& x) {
  const Spectrum s = eigendecompose(x);
  const int n = x.dim();
  RealVector sign(n);
  for (int i = 0; i < n; ++i) sign(i) = s.eigenvalues(i) >= 0.0 ? 1.0 : -1.0;
  ComplexMatrix h = s.eigenvectors * sign.asDiagonal() * s.eigenvectors.adjoint();
  return {HermitianOperator(0.5 * (h + h.adjoint())), s.eigenvalues.cwiseAbs().sum()};
}

// --- dense helpers --- //

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows() || a.rows() != b.cols()) throw DimensionError("trace_product: dimension mismatch");
  return a.cwiseProduct(b.transpose()).sum();
}

ComplexMatrix evolution_unitary(const HermitianOperator& h, double t) {
  const Spectrum s = eigendecompose(h);
  ComplexVector phases(h.dim());
  for (int i = 0; i < h.dim(); ++i) phases(i) = std::exp(Complex(0.0, s.eigenvalues(i) * t));
  return s.eigenvectors * phases.asDiagonal() * s.eigenvectors.adjoint();
}

double von_neumann_entropy_bits(const DensityMatrix& rho) {
  const RealVector ev = eigenvalues_of(rho.op());
  double s = 0.0;
  for (int i = 0; i < ev.size(); ++i) s -= xlog2x(std::max(ev(i), 0.0));
  return s;
}

}  // namespace ratelab
