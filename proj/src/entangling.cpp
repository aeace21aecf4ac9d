#include "ratelab/entangling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ratelab/scalars.hpp"

namespace ratelab {

// --- BipartitePureState --- //

BipartitePureState::BipartitePureState(int dim_a, int dim_b, ComplexVector amplitudes)
    : dim_a_(dim_a), dim_b_(dim_b), amplitudes_(std::move(amplitudes)) {
  if (dim_a_ <= 0 || dim_b_ <= 0 || amplitudes_.size() != static_cast<Eigen::Index>(dim_a_) * dim_b_) {
    std::ostringstream os;
    os << "BipartitePureState: " << amplitudes_.size() << " amplitudes for dims (" << dim_a_ << ", " << dim_b_
       << ")";
    throw DimensionError(os.str());
  }
  if (!amplitudes_.allFinite()) throw DegenerateInputError("BipartitePureState: non-finite amplitude");
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > kTol.state_norm) {
    throw DegenerateInputError("BipartitePureState: norm " + std::to_string(norm) + " is not 1");
  }
}

BipartitePureState BipartitePureState::from_schmidt(std::span<const double> coefficients, int dim_a, int dim_b) {
  const int r = static_cast<int>(coefficients.size());
  if (r > std::min(dim_a, dim_b)) throw DimensionError("from_schmidt: more coefficients than min(dim_a, dim_b)");
  const double total = std::accumulate(coefficients.begin(), coefficients.end(), 0.0);
  if (std::abs(total - 1.0) > kTol.state_norm) {
    throw DegenerateInputError("from_schmidt: coefficients sum to " + std::to_string(total));
  }
  ComplexVector amps = ComplexVector::Zero(static_cast<Eigen::Index>(dim_a) * dim_b);
  for (int j = 0; j < r; ++j) {
    if (coefficients[j] < 0.0) throw DegenerateInputError("from_schmidt: negative coefficient");
    amps(static_cast<Eigen::Index>(j) * dim_b + j) = std::sqrt(coefficients[j]);
  }
  amps /= amps.norm();
  return BipartitePureState(dim_a, dim_b, std::move(amps));
}

ComplexMatrix BipartitePureState::amplitude_matrix() const {
  return Eigen::Map<const RowMajorMatrix>(amplitudes_.data(), dim_a_, dim_b_);
}

// --- Schmidt decomposition and entropy --- //

SchmidtDecomposition schmidt_decompose(const BipartitePureState& psi) {
  const ComplexMatrix m = psi.amplitude_matrix();
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector sv = svd.singularValues();

  int rank = 0;
  while (rank < sv.size() && sv(rank) * sv(rank) > kTol.schmidt_drop) ++rank;
  if (rank == 0) throw DegenerateInputError("schmidt_decompose: state has no coefficient above the cutoff");

  SchmidtDecomposition out;
  out.coefficients.resize(rank);
  for (int j = 0; j < rank; ++j) out.coefficients[j] = sv(j) * sv(j);
  out.left = svd.matrixU().leftCols(rank);
  out.right = svd.matrixV().conjugate().leftCols(rank);

  ComplexMatrix recon = ComplexMatrix::Zero(m.rows(), m.cols());
  for (int j = 0; j < rank; ++j) recon += sv(j) * out.left.col(j) * out.right.col(j).transpose();
  if ((recon - m).norm() > kTol.spectrum_residual) {
    throw InternalError("schmidt_decompose: reconstruction residual too large");
  }
  return out;
}

double entanglement_entropy(const BipartitePureState& psi) {
  const SchmidtDecomposition sd = schmidt_decompose(psi);
  return shannon_entropy_bits(sd.coefficients);
}

// --- entangling rate --- //

double entangling_rate(const BipartitePureState& psi, const HermitianOperator& h, int ancilla_a, int ancilla_b) {
  if (ancilla_a <= 0 || ancilla_b <= 0 || psi.dim_a() % ancilla_a != 0 || psi.dim_b() % ancilla_b != 0) {
    throw DimensionError("entangling_rate: ancilla dimensions do not divide the state dimensions");
  }
  const int dim_inner_a = psi.dim_a() / ancilla_a;
  const int dim_inner_b = psi.dim_b() / ancilla_b;
  if (h.dim() != dim_inner_a * dim_inner_b) {
    std::ostringstream os;
    os << "entangling_rate: Hamiltonian dim " << h.dim() << ", expected " << dim_inner_a * dim_inner_b;
    throw DimensionError(os.str());
  }

  ComplexMatrix m = psi.amplitude_matrix();
  m /= m.norm();

  const DensityMatrix rho_left(HermitianOperator(m * m.adjoint()));
  const MatrixLog lg = matrix_log2(rho_left);

  // (I_a (x) h (x) I_b) psi, applied blockwise: for each ancilla-a index the
  // amplitudes form a row-major (A*B) x b matrix and h acts on its rows.
  const Eigen::Index block = static_cast<Eigen::Index>(h.dim()) * ancilla_b;
  ComplexVector evolved(psi.amplitudes().size());
  ComplexVector normalized = psi.amplitudes() / psi.amplitudes().norm();
  for (int ja = 0; ja < ancilla_a; ++ja) {
    Eigen::Map<const RowMajorMatrix> in(normalized.data() + ja * block, h.dim(), ancilla_b);
    Eigen::Map<RowMajorMatrix> out(evolved.data() + ja * block, h.dim(), ancilla_b);
    out = h.matrix() * in;
  }

  const ComplexMatrix lm = lg.value.matrix() * m;
  const Complex z =
      (lm.conjugate().cwiseProduct(Eigen::Map<const RowMajorMatrix>(evolved.data(), psi.dim_a(), psi.dim_b())))
          .sum();
  return 2.0 * z.imag();
}

// --- no-ancilla maximum --- //

NoAncillaMaximum gamma_no_ancilla_max(const BipartitePureState& psi) {
  const SchmidtDecomposition sd = schmidt_decompose(psi);
  const double gamma = 2.0 * std::sqrt(std::max(log_spectrum_variance(sd.coefficients), 0.0));

  const int dim = psi.dim_a() * psi.dim_b();
  if (sd.coefficients.size() == 1) return {0.0, HermitianOperator::identity(dim)};

  ComplexMatrix m = psi.amplitude_matrix();
  m /= m.norm();
  const DensityMatrix rho_a(HermitianOperator(m * m.adjoint()));
  const ComplexMatrix log_a = matrix_log2(rho_a).value.matrix();
  const ComplexMatrix big_log = kron(log_a, ComplexMatrix::Identity(psi.dim_b(), psi.dim_b()));

  ComplexVector v = psi.amplitudes() / psi.amplitudes().norm();
  const ComplexMatrix projector = v * v.adjoint();
  const ComplexMatrix x = Complex(0.0, 1.0) * commutator(big_log, projector);
  TraceNormMaximizer best = optimal_hamiltonian(HermitianOperator(x));
  return {gamma, best.h};
}

// --- binary family --- //

double gamma_lambda(double lambda, int d) {
  if (d < 2) throw DegenerateInputError("gamma_lambda: d must be at least 2");
  if (lambda < 0.5 || lambda > 1.0) throw DegenerateInputError("gamma_lambda: lambda outside [1/2, 1]");
  if (lambda == 1.0) return 0.0;
  return 2.0 * std::sqrt(lambda * (1.0 - lambda)) * std::log2(lambda * (d - 1) / (1.0 - lambda));
}

std::vector<double> binary_schmidt_spectrum(double lambda, int d) {
  std::vector<double> p(static_cast<size_t>(d), (1.0 - lambda) / (d - 1));
  p[0] = lambda;
  return p;
}

LambdaOptimum optimize_lambda(int d) {
  if (d < 2) throw DegenerateInputError("optimize_lambda: d must be at least 2");
  auto f = [d](double lam) { return gamma_lambda(lam, d); };

  // Coarse grid so a narrow interior maximum cannot be missed, then refine.
  constexpr int kGrid = 1000;
  int best = 0;
  double best_value = f(0.5);
  for (int i = 1; i <= kGrid; ++i) {
    const double lam = 0.5 + 0.5 * i / kGrid;
    const double value = f(lam);
    if (value > best_value) {
      best_value = value;
      best = i;
    }
  }
  const double lo = 0.5 + 0.5 * std::max(best - 1, 0) / kGrid;
  const double hi = 0.5 + 0.5 * std::min(best + 1, kGrid) / kGrid;
  const GoldenResult r = golden_section_maximize(f, lo, hi, 1e-8);
  return {r.x, r.value};
}

double binary_stationarity_residual(double lambda, int d) {
  const std::vector<double> p = binary_schmidt_spectrum(lambda, d);
  const double entropy = shannon_entropy_bits(p);
  constexpr double kLog2E = 1.4426950408889634;
  return std::log2(p[0]) + std::log2(p[1]) + 2.0 * (entropy + kLog2E);
}

// --- large-d optimum --- //

OptimalPair optimal_pair_large_d(int d) {
  if (d < 2) throw DegenerateInputError("optimal_pair_large_d: d must be at least 2");
  const Eigen::Index dim = static_cast<Eigen::Index>(d) * d;

  ComplexVector one_one = ComplexVector::Zero(dim);
  one_one(0) = 1.0;
  ComplexVector phi_plus = ComplexVector::Zero(dim);
  for (int j = 1; j < d; ++j) phi_plus(static_cast<Eigen::Index>(j) * d + j) = 1.0 / std::sqrt(d - 1.0);

  ComplexVector amps = (one_one + phi_plus) / std::sqrt(2.0);
  BipartitePureState psi(d, d, std::move(amps));

  const ComplexMatrix h = Complex(0.0, -1.0) * (phi_plus * one_one.adjoint() - one_one * phi_plus.adjoint());
  return {std::move(psi), HermitianOperator(h)};
}

// --- figure 2 --- //

std::vector<Figure2Row> figure2_scan(std::span<const int> d_values) {
  std::vector<Figure2Row> rows;
  rows.reserve(d_values.size());
  for (int d : d_values) {
    const LambdaOptimum opt = optimize_lambda(d);
    const double entropy = shannon_entropy_bits(binary_schmidt_spectrum(opt.lambda, d));
    rows.push_back({d, std::log2(static_cast<double>(d)), opt.lambda, opt.gamma, entropy});
  }
  return rows;
}

}  // namespace ratelab
