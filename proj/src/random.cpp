#include "ratelab/random.hpp"

#include <algorithm>
#include <cmath>

namespace ratelab {

namespace {

HermitianOperator symmetrized(const ComplexMatrix& m) { return HermitianOperator(0.5 * (m + m.adjoint())); }

}  // namespace

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

Rng::Rng(std::uint64_t master_seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  engine_.seed(seq);
}

double Rng::uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

double Rng::uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }

double Rng::normal() { return normal_(engine_); }

int Rng::uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

ComplexMatrix random_complex_gaussian(int rows, int cols, Rng& rng) {
  ComplexMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = Complex(rng.normal(), rng.normal());
  return m;
}

ComplexMatrix random_unitary(int dim, Rng& rng) {
  const ComplexMatrix g = random_complex_gaussian(dim, dim, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < dim; ++i) {
    const Complex d = r(i, i);
    if (std::abs(d) > 0.0) q.col(i) *= d / std::abs(d);
  }
  return q;
}

HermitianOperator random_hermitian(int dim, Rng& rng) {
  return symmetrized(random_complex_gaussian(dim, dim, rng));
}

HermitianOperator random_unit_norm_hermitian(int dim, Rng& rng) {
  const HermitianOperator h = random_hermitian(dim, rng);
  const double norm = operator_norm(h);
  if (norm == 0.0) return HermitianOperator::identity(dim);
  return HermitianOperator(h.matrix() / norm);
}

HermitianOperator random_projector(int dim, int rank, Rng& rng) {
  if (rank <= 0) return HermitianOperator::zero(dim);
  rank = std::min(rank, dim);
  const ComplexMatrix g = random_complex_gaussian(dim, rank, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  const ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, rank);
  return symmetrized(q * q.adjoint());
}

HermitianOperator random_contraction(int dim, Rng& rng) {
  const ComplexMatrix u = random_unitary(dim, rng);
  RealVector ev(dim);
  for (int i = 0; i < dim; ++i) ev(i) = rng.uniform();
  return symmetrized(u * ev.asDiagonal() * u.adjoint());
}

DensityMatrix random_density(int dim, Rng& rng, double min_eigenvalue) {
  const ComplexMatrix g = random_complex_gaussian(dim, dim, rng);
  ComplexMatrix w = g * g.adjoint();
  w /= w.trace().real();
  if (min_eigenvalue > 0.0) {
    const double c = std::min(min_eigenvalue * dim, 1.0);
    w = (1.0 - c) * w + c / dim * ComplexMatrix::Identity(dim, dim);
  }
  return DensityMatrix(symmetrized(w));
}

BipartitePureState random_pure_state(int dim_a, int dim_b, Rng& rng, double min_schmidt) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    ComplexVector v(static_cast<Eigen::Index>(dim_a) * dim_b);
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(rng.normal(), rng.normal());
    v /= v.norm();
    BipartitePureState psi(dim_a, dim_b, std::move(v));
    if (min_schmidt <= 0.0) return psi;
    const SchmidtDecomposition sd = schmidt_decompose(psi);
    if (static_cast<int>(sd.coefficients.size()) == std::min(dim_a, dim_b) &&
        sd.coefficients.back() >= min_schmidt) {
      return psi;
    }
  }
  throw DegenerateInputError("random_pure_state: could not reach the Schmidt floor");
}

Ensemble random_ensemble(int dim, Rng& rng, double min_member_eigenvalue) {
  const double p = rng.uniform(0.02, 0.98);
  DensityMatrix rho0 = random_density(dim, rng, min_member_eigenvalue);
  DensityMatrix rho1 = random_density(dim, rng, min_member_eigenvalue);
  return Ensemble(p, std::move(rho0), std::move(rho1));
}

DensityMatrix random_binary_density(int dim, int multiplicity_high, Rng& rng) {
  if (multiplicity_high <= 0 || multiplicity_high >= dim) {
    throw DegenerateInputError("random_binary_density: multiplicity must be in [1, dim-1]");
  }
  const double ratio = std::exp(rng.uniform(std::log(1.5), std::log(50.0)));
  const double low = 1.0 / (multiplicity_high * ratio + (dim - multiplicity_high));
  const double high = ratio * low;
  RealVector ev(dim);
  for (int i = 0; i < dim; ++i) ev(i) = i < multiplicity_high ? high : low;
  const ComplexMatrix u = random_unitary(dim, rng);
  return DensityMatrix(symmetrized(u * ev.asDiagonal() * u.adjoint()));
}

HermitianOperator random_admissible_pi(const DensityMatrix& rho, double p, Rng& rng) {
  const int dim = rho.dim();
  const HermitianOperator pi0 = random_contraction(dim, rng);
  const double q = trace_product(pi0.matrix(), rho.matrix()).real();
  ComplexMatrix pi;
  if (q >= p) {
    pi = (q > 0.0 ? p / q : 0.0) * pi0.matrix();
  } else {
    const double t = (p - q) / (1.0 - q);
    pi = (1.0 - t) * pi0.matrix() + t * ComplexMatrix::Identity(dim, dim);
  }
  return symmetrized(pi);
}

EnsembleTriple random_binary_triple(int dim, Rng& rng, double p_max) {
  const int mult = rng.uniform_int(1, dim - 1);
  DensityMatrix rho = random_binary_density(dim, mult, rng);
  const double p = std::exp(rng.uniform(std::log(0.005), std::log(p_max)));
  HermitianOperator pi = random_admissible_pi(rho, p, rng);
  return EnsembleTriple(p, std::move(rho), std::move(pi));
}

}  // namespace ratelab
