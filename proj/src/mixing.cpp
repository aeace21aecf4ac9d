#include "ratelab/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "ratelab/scalars.hpp"

namespace ratelab {

namespace {

constexpr Complex kImag{0.0, 1.0};

HermitianOperator symmetrized(const ComplexMatrix& m) { return HermitianOperator(0.5 * (m + m.adjoint())); }

// rho^{1/2} [Pi, log rho] rho^{1/2}, the anti-Hermitian core of the mixing
// rate. log is taken on the support of rho.
ComplexMatrix mixing_sandwich(const EnsembleTriple& t, bool* support_restricted = nullptr) {
  const HermitianOperator sqrt_rho = matrix_sqrt(t.rho());
  const MatrixLog lg = matrix_log2(t.rho());
  if (support_restricted != nullptr) *support_restricted = !lg.full_rank();
  return sqrt_rho.matrix() * commutator(t.pi(), lg.value) * sqrt_rho.matrix();
}

DensityMatrix clamped_density(const ComplexMatrix& m, double min_allowed, const char* what) {
  const HermitianOperator h = symmetrized(m);
  const Spectrum s = eigendecompose(h);
  if (s.eigenvalues(0) < min_allowed) {
    std::ostringstream os;
    os << what << ": eigenvalue " << s.eigenvalues(0) << " below " << min_allowed;
    throw InadmissibleError(os.str());
  }
  RealVector clipped = s.eigenvalues.cwiseMax(0.0);
  clipped /= clipped.sum();
  ComplexMatrix out = s.eigenvectors * clipped.asDiagonal() * s.eigenvectors.adjoint();
  return DensityMatrix(symmetrized(out));
}

}  // namespace

// --- ensembles and triples --- //

Ensemble::Ensemble(double p_in, DensityMatrix rho0_in, DensityMatrix rho1_in)
    : p(p_in), rho0(std::move(rho0_in)), rho1(std::move(rho1_in)) {
  if (rho0.dim() != rho1.dim()) throw DimensionError("Ensemble: member dimensions differ");
  if (p < 0.0 || p > 1.0) throw DegenerateInputError("Ensemble: p outside [0, 1]");
}

DensityMatrix Ensemble::average() const {
  return DensityMatrix(symmetrized((1.0 - p) * rho0.matrix() + p * rho1.matrix()));
}

EnsembleTriple::EnsembleTriple(double p, DensityMatrix rho, HermitianOperator pi)
    : p_(p), rho_(std::move(rho)), pi_(std::move(pi)) {
  if (rho_.dim() != pi_.dim()) throw DimensionError("EnsembleTriple: rho and Pi dimensions differ");
  if (p_ < 0.0 || p_ > 1.0) throw DegenerateInputError("EnsembleTriple: p outside [0, 1]");
  const RealVector ev = eigenvalues_of(pi_);
  if (ev(0) < -kTol.triple_pi_eigenvalue || ev(ev.size() - 1) > 1.0 + kTol.triple_pi_eigenvalue) {
    std::ostringstream os;
    os << "EnsembleTriple: Pi spectrum [" << ev(0) << ", " << ev(ev.size() - 1) << "] outside [0, 1]";
    throw InadmissibleError(os.str());
  }
  const double traced = trace_product(pi_.matrix(), rho_.matrix()).real();
  if (std::abs(traced - p_) > kTol.triple_trace) {
    std::ostringstream os;
    os << "EnsembleTriple: Tr(Pi rho) = " << traced << ", expected " << p_;
    throw InadmissibleError(os.str());
  }
}

EnsembleTriple ensemble_to_triple(const Ensemble& e) {
  const DensityMatrix rho = e.average();
  const HermitianOperator inv_sqrt = matrix_inverse_sqrt(rho);
  ComplexMatrix pi = e.p * inv_sqrt.matrix() * e.rho1.matrix() * inv_sqrt.matrix();
  const double traced = trace_product(pi, rho.matrix()).real();
  if (std::abs(traced - e.p) > kTol.triple_trace) {
    throw InconsistentEnsembleError(
        "ensemble_to_triple: rho1 has weight outside the support of the average state");
  }
  return EnsembleTriple(e.p, rho, symmetrized(pi));
}

Ensemble triple_to_ensemble(const EnsembleTriple& t) {
  if (t.p() <= 0.0 || t.p() >= 1.0) {
    throw DegenerateInputError("triple_to_ensemble: p must lie strictly between 0 and 1");
  }
  const ComplexMatrix sqrt_rho = matrix_sqrt(t.rho()).matrix();
  const ComplexMatrix rho1 = sqrt_rho * t.pi().matrix() * sqrt_rho / t.p();
  const ComplexMatrix rho0 = (t.rho().matrix() - t.p() * rho1) / (1.0 - t.p());
  return Ensemble(t.p(), clamped_density(rho0, -1e-8, "triple_to_ensemble: rho0"),
                  clamped_density(rho1, -1e-8, "triple_to_ensemble: rho1"));
}

// --- mixing rate --- //

double mixing_rate(const EnsembleTriple& t, const HermitianOperator& h) {
  if (h.dim() != t.rho().dim()) throw DimensionError("mixing_rate: Hamiltonian dimension mismatch");
  return trace_product(h.matrix(), mixing_sandwich(t)).imag();
}

MaxMixingRate max_mixing_rate(const EnsembleTriple& t) {
  bool restricted = false;
  const ComplexMatrix sandwich = mixing_sandwich(t, &restricted);
  const HermitianOperator x = symmetrized(-kImag * sandwich);
  TraceNormMaximizer best = optimal_hamiltonian(x);
  return {best.value, std::move(best.h), restricted};
}

// --- binary spectrum machinery --- //

BinarySpectrum binary_spectrum_of(const DensityMatrix& rho) {
  const Spectrum s = eigendecompose(rho.op());
  const int n = rho.dim();

  std::vector<int> cluster_start{0};
  for (int i = 1; i < n; ++i) {
    if (s.eigenvalues(i) - s.eigenvalues(i - 1) > kTol.binary_gap) cluster_start.push_back(i);
  }
  if (cluster_start.size() != 2) {
    throw NotBinarySpectrumError("binary_spectrum_of: found " + std::to_string(cluster_start.size()) +
                                 " eigenvalue clusters");
  }
  const int split = cluster_start[1];
  const double low_spread = s.eigenvalues(split - 1) - s.eigenvalues(0);
  const double high_spread = s.eigenvalues(n - 1) - s.eigenvalues(split);
  if (low_spread > kTol.binary_spread || high_spread > kTol.binary_spread) {
    throw NotBinarySpectrumError("binary_spectrum_of: in-cluster spread exceeds the tolerance");
  }

  const int mult_high = n - split;
  const ComplexMatrix top = s.eigenvectors.rightCols(mult_high);
  return {s.eigenvalues.tail(mult_high).mean(), s.eigenvalues.head(split).mean(), mult_high,
          symmetrized(top * top.adjoint())};
}

SandwichIdentity binary_sandwich_identity(const EnsembleTriple& t) {
  const BinarySpectrum bs = binary_spectrum_of(t.rho());
  const ComplexMatrix sandwich = mixing_sandwich(t);
  const double factor = std::log2(bs.lambda_high / bs.lambda_low) * std::sqrt(bs.lambda_high * bs.lambda_low);
  const ComplexMatrix rhs = factor * commutator(t.pi().matrix(), bs.top_projector.matrix());
  return {symmetrized(kImag * sandwich), symmetrized(kImag * rhs)};
}

HolderBound holder_commutator_bound(const HermitianOperator& pi, const HermitianOperator& r) {
  if (pi.dim() != r.dim()) throw DimensionError("holder_commutator_bound: dimension mismatch");
  const double lhs = trace_norm(symmetrized(kImag * commutator(pi, r)));
  const ComplexMatrix r_perp = ComplexMatrix::Identity(r.dim(), r.dim()) - r.matrix();
  const double tr_r = std::max(trace_product(pi.matrix(), r.matrix()).real(), 0.0);
  const double tr_perp = std::max(trace_product(pi.matrix(), r_perp).real(), 0.0);
  return {lhs, 2.0 * std::sqrt(tr_r * tr_perp)};
}

namespace {

// Reduction of a single projector P against R: compress P to the span of the
// interior eigenvectors (eigenvalues strictly inside (0,1)) of its two
// diagonal blocks. The edge blocks decouple, so the compression keeps the
// commutator with R while dropping trace.
ComplexMatrix reduce_projector(const ComplexMatrix& p, const ComplexMatrix& range_r,
                               const ComplexMatrix& range_r_perp) {
  const int n = static_cast<int>(p.rows());
  std::vector<ComplexVector> interior;

  for (const ComplexMatrix* basis : {&range_r, &range_r_perp}) {
    if (basis->cols() == 0) continue;
    const ComplexMatrix block = basis->adjoint() * p * (*basis);
    const Spectrum s = eigendecompose(symmetrized(block));
    for (int i = 0; i < s.eigenvalues.size(); ++i) {
      if (s.eigenvalues(i) > kTol.canonical_edge && s.eigenvalues(i) < 1.0 - kTol.canonical_edge) {
        interior.push_back((*basis) * s.eigenvectors.col(i));
      }
    }
  }
  if (interior.empty()) return ComplexMatrix::Zero(n, n);

  ComplexMatrix v(n, static_cast<int>(interior.size()));
  for (int i = 0; i < v.cols(); ++i) v.col(i) = interior[static_cast<size_t>(i)];
  const ComplexMatrix pv = v * v.adjoint();
  return pv * p * pv;
}

}  // namespace

HermitianOperator canonical_reduce(const HermitianOperator& pi, const HermitianOperator& r) {
  if (pi.dim() != r.dim()) throw DimensionError("canonical_reduce: dimension mismatch");
  const int n = pi.dim();

  const Spectrum r_spec = eigendecompose(r);
  for (int i = 0; i < n; ++i) {
    if (std::abs(r_spec.eigenvalues(i)) > kTol.canonical_edge &&
        std::abs(r_spec.eigenvalues(i) - 1.0) > kTol.canonical_edge) {
      throw DegenerateInputError("canonical_reduce: R is not a projector");
    }
  }
  int m = 0;
  for (int i = 0; i < n; ++i) m += r_spec.eigenvalues(i) > 0.5 ? 1 : 0;
  const ComplexMatrix range_r = r_spec.eigenvectors.rightCols(m);
  const ComplexMatrix range_r_perp = r_spec.eigenvectors.leftCols(n - m);

  const Spectrum pi_spec = eigendecompose(pi);
  if (pi_spec.eigenvalues(0) < -kTol.triple_pi_eigenvalue ||
      pi_spec.eigenvalues(n - 1) > 1.0 + kTol.triple_pi_eigenvalue) {
    throw DegenerateInputError("canonical_reduce: Pi spectrum outside [0, 1]");
  }

  // Pi = sum_k (mu_k - mu_{k+1}) P_{top-k}; reduce each layer projector.
  std::vector<double> mu(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) mu[static_cast<size_t>(i)] = std::clamp(pi_spec.eigenvalues(n - 1 - i), 0.0, 1.0);

  ComplexMatrix reduced = ComplexMatrix::Zero(n, n);
  ComplexMatrix layer = ComplexMatrix::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const ComplexVector top = pi_spec.eigenvectors.col(n - 1 - k);
    layer += top * top.adjoint();
    const double weight = mu[static_cast<size_t>(k)] - (k + 1 < n ? mu[static_cast<size_t>(k) + 1] : 0.0);
    if (weight <= 0.0) continue;
    reduced += weight * reduce_projector(layer, range_r, range_r_perp);
  }
  return symmetrized(reduced);
}

// --- the g lemma --- //

double g_function(double x1, double x2, double q) {
  if (!(q >= 0.0 && q <= 0.5)) throw DegenerateInputError("g_function: q outside [0, 1/2]");
  if (!(x2 >= 0.0 && x2 <= q && q <= x1 && x1 <= 1.0)) {
    throw DegenerateInputError("g_function: expected 0 <= x2 <= q <= x1 <= 1");
  }
  if (x1 == x2) {
    if (x1 == q || x2 == q) return 0.0;
    throw DegenerateInputError("g_function: x1 == x2 away from q");
  }
  if (x2 == 0.0) return 0.0;  // sqrt(x2) log(x1/x2) -> 0
  const double radicand = x1 * x2 * (q - x2) * (x1 - q);
  if (radicand <= 0.0) return 0.0;
  return 2.0 * std::log2(x1 / x2) * std::sqrt(radicand) / (x1 - x2);
}

SimBinaryBound sim_binary_bound(const EnsembleTriple& t) {
  binary_spectrum_of(t.rho());  // reject non-binary inputs up front
  const double bound = 6.0 * binary_entropy_bits(t.p());
  if (t.p() <= 0.5) return {max_mixing_rate(t).lambda, bound};
  // Transpose symmetry: the swapped ensemble has probability 1-p <= 1/2 and
  // the same maximal rate.
  const EnsembleTriple swapped = ensemble_to_triple(triple_to_ensemble(t).transposed());
  return {max_mixing_rate(swapped).lambda, bound};
}

// --- reduction to the mixing problem --- //

EnsembleTriple sie_reduction(const DensityMatrix& rho_ab, int dim_a, int dim_b) {
  if (dim_a * dim_b != rho_ab.dim()) throw DimensionError("sie_reduction: dims do not factor the state");
  if (dim_b < 2) throw DegenerateInputError("sie_reduction: dim_b must be at least 2");

  const HermitianOperator rho_a = partial_trace(rho_ab.op(), dim_a, dim_b, Keep::First);
  const ComplexMatrix tau =
      kron(rho_a.matrix(), ComplexMatrix::Identity(dim_b, dim_b)) / static_cast<double>(dim_b);
  const double p = 1.0 / (static_cast<double>(dim_b) * dim_b);

  const ComplexMatrix mu = (tau - p * rho_ab.matrix()) / (1.0 - p);
  const RealVector mu_ev = eigenvalues_of(mu);
  if (mu_ev(0) < kTol.mu_min_eigenvalue) {
    throw InternalError("sie_reduction: residual state eigenvalue " + std::to_string(mu_ev(0)) +
                        " violates the decomposition guarantee");
  }

  const DensityMatrix tau_density{symmetrized(tau)};
  const HermitianOperator inv_sqrt = matrix_inverse_sqrt(tau_density);
  const ComplexMatrix pi = p * inv_sqrt.matrix() * rho_ab.matrix() * inv_sqrt.matrix();
  return EnsembleTriple(p, tau_density, symmetrized(pi));
}

EntanglingEmbedding ensemble_to_entangling_embedding(const Ensemble& e, const HermitianOperator& h) {
  const int dim = e.rho0.dim();
  if (h.dim() != dim) throw DimensionError("ensemble_to_entangling_embedding: Hamiltonian dimension mismatch");

  // Canonical purification of rho on A (x) b: amplitudes are the entries of
  // rho^{1/2}.
  const ComplexMatrix phi0 = matrix_sqrt(e.rho0).matrix();
  const ComplexMatrix phi1 = matrix_sqrt(e.rho1).matrix();

  const Eigen::Index total = static_cast<Eigen::Index>(dim) * 2 * dim;
  ComplexVector amps = ComplexVector::Zero(total);
  const double w0 = std::sqrt(1.0 - e.p);
  const double w1 = std::sqrt(e.p);
  for (int ja = 0; ja < dim; ++ja) {
    for (int jb = 0; jb < dim; ++jb) {
      amps((static_cast<Eigen::Index>(ja) * 2 + 0) * dim + jb) = w0 * phi0(ja, jb);
      amps((static_cast<Eigen::Index>(ja) * 2 + 1) * dim + jb) = w1 * phi1(ja, jb);
    }
  }
  amps /= amps.norm();

  ComplexMatrix p1 = ComplexMatrix::Zero(2, 2);
  p1(1, 1) = 1.0;
  return {BipartitePureState(dim, 2 * dim, std::move(amps)), HermitianOperator(kron(h.matrix(), p1))};
}

}  // namespace ratelab
