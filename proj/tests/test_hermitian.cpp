#include <doctest.h>

#include <cmath>

#include "ratelab/hermitian.hpp"
#include "ratelab/random.hpp"

using namespace ratelab;

namespace {

HermitianOperator pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return HermitianOperator(m);
}

}  // namespace

TEST_CASE("construction symmetrizes and validates") {
  ComplexMatrix m(2, 2);
  m << Complex(1.0, 0.0), Complex(0.5, 0.25), Complex(0.5, -0.25), Complex(-2.0, 0.0);
  const HermitianOperator h(m);
  CHECK((h.matrix() - h.matrix().adjoint()).norm() == doctest::Approx(0.0));

  ComplexMatrix bad = m;
  bad(0, 1) = Complex(0.5, 0.25 + 1e-6);
  CHECK_THROWS_AS(HermitianOperator{bad}, DegenerateInputError);

  ComplexMatrix rect(2, 3);
  rect.setZero();
  CHECK_THROWS_AS(HermitianOperator{rect}, DimensionError);
}

TEST_CASE("density matrix invariants") {
  CHECK_NOTHROW(DensityMatrix::from_diagonal({0.5, 0.5}));
  CHECK_THROWS_AS(DensityMatrix::from_diagonal({0.7, 0.7}), DegenerateInputError);
  CHECK_THROWS_AS(DensityMatrix::from_diagonal({1.5, -0.5}), DegenerateInputError);
}

TEST_CASE("eigendecompose on stated examples") {
  const Spectrum s = eigendecompose(HermitianOperator::diagonal({3, 1, 2}));
  CHECK(s.eigenvalues(0) == doctest::Approx(1));
  CHECK(s.eigenvalues(1) == doctest::Approx(2));
  CHECK(s.eigenvalues(2) == doctest::Approx(3));

  const Spectrum id = eigendecompose(HermitianOperator::identity(5));
  for (int i = 0; i < 5; ++i) CHECK(id.eigenvalues(i) == doctest::Approx(1.0));

  const Spectrum px = eigendecompose(pauli_x());
  CHECK(px.eigenvalues(0) == doctest::Approx(-1.0));
  CHECK(px.eigenvalues(1) == doctest::Approx(1.0));
}

TEST_CASE("spectrum invariants on random matrices") {
  Rng rng(11);
  for (int i = 0; i < 20; ++i) {
    const int dim = rng.uniform_int(2, 12);
    const HermitianOperator h = random_hermitian(dim, rng);
    const Spectrum s = eigendecompose(h);
    for (int k = 1; k < dim; ++k) CHECK(s.eigenvalues(k) >= s.eigenvalues(k - 1));
    const double recon =
        (s.eigenvectors * s.eigenvalues.asDiagonal() * s.eigenvectors.adjoint() - h.matrix()).norm();
    CHECK(recon <= 1e-9 * std::max(1.0, h.matrix().norm()));
    CHECK((s.eigenvectors.adjoint() * s.eigenvectors - ComplexMatrix::Identity(dim, dim)).norm() <= 1e-9);
  }
}

TEST_CASE("trace and operator norms") {
  CHECK(trace_norm(HermitianOperator::diagonal({1, -2})) == doctest::Approx(3));
  CHECK(trace_norm(HermitianOperator::zero(3)) == doctest::Approx(0));
  CHECK(trace_norm(HermitianOperator::diagonal({1, -1})) == doctest::Approx(2));

  CHECK(operator_norm(HermitianOperator::diagonal({1, -2})) == doctest::Approx(2));
  CHECK(operator_norm(HermitianOperator::identity(4)) == doctest::Approx(1));
  CHECK(operator_norm(HermitianOperator(0.5 * pauli_x().matrix())) == doctest::Approx(0.5));
}

TEST_CASE("norm sandwich: trace_norm >= operator_norm >= trace_norm/dim") {
  Rng rng(12);
  for (int i = 0; i < 30; ++i) {
    const int dim = rng.uniform_int(2, 10);
    const HermitianOperator h = random_hermitian(dim, rng);
    const double tn = trace_norm(h);
    const double on = operator_norm(h);
    CHECK(tn >= on - 1e-12);
    CHECK(on >= tn / dim - 1e-12);
  }
}

TEST_CASE("matrix_log2 on stated examples") {
  const MatrixLog uniform = matrix_log2(DensityMatrix::maximally_mixed(4));
  CHECK(uniform.full_rank());
  CHECK((uniform.value.matrix() + 2.0 * ComplexMatrix::Identity(4, 4)).norm() == doctest::Approx(0.0));

  const MatrixLog half = matrix_log2(DensityMatrix::from_diagonal({0.5, 0.5}));
  CHECK((half.value.matrix() + ComplexMatrix::Identity(2, 2)).norm() == doctest::Approx(0.0));

  const MatrixLog thirds = matrix_log2(DensityMatrix::from_diagonal({2.0 / 3, 1.0 / 3}));
  CHECK(thirds.value.matrix()(0, 0).real() == doctest::Approx(std::log2(2.0 / 3)));
  CHECK(thirds.value.matrix()(1, 1).real() == doctest::Approx(std::log2(1.0 / 3)));

  const MatrixLog rank1 = matrix_log2(DensityMatrix::from_diagonal({1.0, 0.0}));
  CHECK(rank1.support_rank == 1);
  CHECK_FALSE(rank1.full_rank());
  CHECK(rank1.value.matrix().norm() == doctest::Approx(0.0));

  CHECK_THROWS_AS(matrix_log2(DensityMatrix::maximally_mixed(2), -1.0), DegenerateInputError);
}

TEST_CASE("exp2 of matrix_log2 recovers full-rank states") {
  Rng rng(13);
  for (int i = 0; i < 10; ++i) {
    const int dim = rng.uniform_int(2, 8);
    const DensityMatrix rho = random_density(dim, rng, 1e-3);
    const Spectrum s = eigendecompose(matrix_log2(rho).value);
    RealVector back(dim);
    for (int k = 0; k < dim; ++k) back(k) = std::exp2(s.eigenvalues(k));
    const ComplexMatrix recovered = s.eigenvectors * back.asDiagonal() * s.eigenvectors.adjoint();
    CHECK((recovered - rho.matrix()).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("matrix_sqrt squares back") {
  const HermitianOperator a = matrix_sqrt(DensityMatrix::from_diagonal({0.8, 0.2}));
  CHECK(a.matrix()(0, 0).real() == doctest::Approx(std::sqrt(0.8)));
  CHECK(a.matrix()(1, 1).real() == doctest::Approx(std::sqrt(0.2)));

  CHECK((matrix_sqrt(DensityMatrix::maximally_mixed(3)).matrix() -
         ComplexMatrix::Identity(3, 3) / std::sqrt(3.0))
            .norm() == doctest::Approx(0.0));

  Rng rng(14);
  ComplexVector v(4);
  for (int k = 0; k < 4; ++k) v(k) = Complex(rng.normal(), rng.normal());
  const DensityMatrix proj = DensityMatrix::pure(v);
  CHECK((matrix_sqrt(proj).matrix() - proj.matrix()).cwiseAbs().maxCoeff() <= 1e-12);

  for (int i = 0; i < 10; ++i) {
    const int dim = rng.uniform_int(2, 9);
    const DensityMatrix rho = random_density(dim, rng);
    const ComplexMatrix root = matrix_sqrt(rho).matrix();
    CHECK(operator_norm(HermitianOperator(root * root - rho.matrix() +
                                          1e-30 * ComplexMatrix::Identity(dim, dim))) <= 1e-9);
  }
}

TEST_CASE("commutator algebra") {
  const HermitianOperator d1 = HermitianOperator::diagonal({1, 2, 3});
  const HermitianOperator d2 = HermitianOperator::diagonal({-1, 5, 0});
  CHECK(commutator(d1, d2).norm() == doctest::Approx(0.0));

  const ComplexMatrix c = commutator(pauli_x(), HermitianOperator::diagonal({1, 0}));
  CHECK(c(0, 0) == Complex(0, 0));
  CHECK(c(0, 1) == Complex(-1, 0));
  CHECK(c(1, 0) == Complex(1, 0));
  CHECK(c(1, 1) == Complex(0, 0));

  Rng rng(15);
  const HermitianOperator a = random_hermitian(5, rng);
  CHECK(commutator(a, a).norm() == doctest::Approx(0.0));
  CHECK_THROWS_AS(commutator(a, pauli_x()), DimensionError);
}

TEST_CASE("partial trace") {
  Rng rng(16);
  const DensityMatrix rho = random_density(3, rng);
  const DensityMatrix sigma = random_density(4, rng);
  const HermitianOperator prod(kron(rho.matrix(), sigma.matrix()));

  const HermitianOperator keep_a = partial_trace(prod, 3, 4, Keep::First);
  CHECK((keep_a.matrix() - rho.matrix()).cwiseAbs().maxCoeff() <= 1e-12);
  const HermitianOperator keep_b = partial_trace(prod, 3, 4, Keep::Second);
  CHECK((keep_b.matrix() - sigma.matrix()).cwiseAbs().maxCoeff() <= 1e-12);

  ComplexVector bell = ComplexVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const HermitianOperator bell_proj(bell * bell.adjoint());
  CHECK((partial_trace(bell_proj, 2, 2, Keep::First).matrix() - 0.5 * ComplexMatrix::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff() <= 1e-12);

  const HermitianOperator big = HermitianOperator::identity(9);
  CHECK((partial_trace(big, 3, 3, Keep::First).matrix() - 3.0 * ComplexMatrix::Identity(3, 3))
            .cwiseAbs()
            .maxCoeff() <= 1e-12);

  // trace preservation on random input
  const HermitianOperator h = random_hermitian(12, rng);
  CHECK(partial_trace(h, 3, 4, Keep::First).matrix().trace().real() ==
        doctest::Approx(h.matrix().trace().real()).epsilon(1e-12));
  CHECK_THROWS_AS(partial_trace(h, 5, 2, Keep::First), DimensionError);
}

TEST_CASE("optimal_hamiltonian on stated examples") {
  const TraceNormMaximizer a = optimal_hamiltonian(HermitianOperator::diagonal({1, -1}));
  CHECK(a.value == doctest::Approx(2));
  CHECK((a.h.matrix() - HermitianOperator::diagonal({1, -1}).matrix()).norm() == doctest::Approx(0.0));

  CHECK(optimal_hamiltonian(HermitianOperator::diagonal({2, 0, -1})).value == doctest::Approx(3));

  const TraceNormMaximizer zero = optimal_hamiltonian(HermitianOperator::zero(3));
  CHECK(zero.value == doctest::Approx(0));
  CHECK((zero.h.matrix() - ComplexMatrix::Identity(3, 3)).norm() <= 1e-12);
}

TEST_CASE("optimal_hamiltonian dominates random unit-norm competitors") {
  Rng rng(17);
  const int dim = 5;
  const HermitianOperator x = random_hermitian(dim, rng);
  const TraceNormMaximizer best = optimal_hamiltonian(x);
  CHECK(operator_norm(best.h) == doctest::Approx(1.0));
  CHECK(trace_product(best.h.matrix(), x.matrix()).real() == doctest::Approx(trace_norm(x)).epsilon(1e-9));
  for (int i = 0; i < 1000; ++i) {
    const HermitianOperator h = random_unit_norm_hermitian(dim, rng);
    CHECK(trace_product(h.matrix(), x.matrix()).real() <= best.value + 1e-9);
  }
}

// || |Phi><Psi| - |Psi><Phi| ||_1 = 2 sqrt(<Psi|Psi><Phi|Phi> - Re^2<Psi|Phi>).
// With a real overlap (the case the formula gets applied to, Phi = H Psi for
// Hermitian H) the Re^2 term is the full |<Psi|Phi>|^2.
TEST_CASE("rank-one trace-norm identity") {
  Rng rng(18);
  for (int i = 0; i < 50; ++i) {
    const int dim = rng.uniform_int(2, 16);
    ComplexVector psi(dim), phi(dim);
    for (int k = 0; k < dim; ++k) {
      psi(k) = Complex(rng.normal(), rng.normal());
      phi(k) = Complex(rng.normal(), rng.normal());
    }
    const ComplexMatrix asym = phi * psi.adjoint() - psi * phi.adjoint();
    const double lhs = trace_norm(HermitianOperator(Complex(0, 1) * asym));
    const double overlap_re = psi.dot(phi).real();
    const double rhs = 2.0 * std::sqrt(
        std::max(psi.squaredNorm() * phi.squaredNorm() - overlap_re * overlap_re, 0.0));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  }
}

TEST_CASE("rank-one identity, Hermitian-image form") {
  Rng rng(19);
  for (int i = 0; i < 50; ++i) {
    const int dim = rng.uniform_int(2, 16);
    ComplexVector psi(dim);
    for (int k = 0; k < dim; ++k) psi(k) = Complex(rng.normal(), rng.normal());
    const ComplexVector phi = random_hermitian(dim, rng).matrix() * psi;  // real overlap
    const ComplexMatrix asym = phi * psi.adjoint() - psi * phi.adjoint();
    const double lhs = trace_norm(HermitianOperator(Complex(0, 1) * asym));
    const double rhs =
        2.0 * std::sqrt(std::max(psi.squaredNorm() * phi.squaredNorm() - std::norm(psi.dot(phi)), 0.0));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  }
}
