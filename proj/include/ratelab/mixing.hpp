#pragma once

#include <utility>

#include "ratelab/entangling.hpp"
#include "ratelab/hermitian.hpp"

namespace ratelab {

/// Two-element ensemble: state rho1 with probability p, rho0 with 1-p.
struct Ensemble {
  Ensemble(double p, DensityMatrix rho0, DensityMatrix rho1);

  DensityMatrix average() const;
  Ensemble transposed() const { return Ensemble(1.0 - p, rho1, rho0); }

  double p;
  DensityMatrix rho0;
  DensityMatrix rho1;
};

/// Canonical (p, rho, Pi) encoding of a two-element ensemble: rho is the
/// average state and Pi = p rho^{-1/2} rho1 rho^{-1/2}. Admissibility
/// (0 <= Pi <= I, Tr(Pi rho) = p) is validated at construction.
class EnsembleTriple {
 public:
  EnsembleTriple(double p, DensityMatrix rho, HermitianOperator pi);

  double p() const { return p_; }
  const DensityMatrix& rho() const { return rho_; }
  const HermitianOperator& pi() const { return pi_; }

 private:
  double p_;
  DensityMatrix rho_;
  HermitianOperator pi_;
};

EnsembleTriple ensemble_to_triple(const Ensemble& e);
Ensemble triple_to_ensemble(const EnsembleTriple& t);

/// d/dt of the von Neumann entropy (bits) of (1-p) rho0 + p e^{iHt} rho1
/// e^{-iHt} at t = 0, evaluated as -i Tr(H rho^{1/2} [Pi, log rho] rho^{1/2}).
/// A rank-deficient rho is handled on its support.
double mixing_rate(const EnsembleTriple& t, const HermitianOperator& h);

struct MaxMixingRate {
  double lambda;
  HermitianOperator h_opt;
  bool support_restricted;
};

/// Maximum of the mixing rate over unit-norm Hamiltonians:
/// || rho^{1/2} [Pi, log rho] rho^{1/2} ||_1.
MaxMixingRate max_mixing_rate(const EnsembleTriple& t);

struct BinarySpectrum {
  double lambda_high;
  double lambda_low;
  int multiplicity_high;
  HermitianOperator top_projector;
};

/// Clusters the spectrum of rho into exactly two groups (gap above
/// kTol.binary_gap, in-cluster spread below kTol.binary_spread) or throws
/// NotBinarySpectrumError.
BinarySpectrum binary_spectrum_of(const DensityMatrix& rho);

/// Both sides of the binary-spectrum identity, each multiplied by i so they
/// are Hermitian:
///   i rho^{1/2}[Pi, log rho] rho^{1/2}  ==  log2(l1/l2) sqrt(l1 l2) i [Pi, R].
struct SandwichIdentity {
  HermitianOperator sandwich;
  HermitianOperator commutator_form;
};

SandwichIdentity binary_sandwich_identity(const EnsembleTriple& t);

struct HolderBound {
  double lhs;  // || [Pi, R] ||_1
  double rhs;  // 2 sqrt(Tr(Pi R) Tr(Pi R_perp))
};

HolderBound holder_commutator_bound(const HermitianOperator& pi, const HermitianOperator& r);

/// Given 0 <= Pi <= I and a projector R of rank m, returns Pi' with
/// 0 <= Pi' <= Pi, [Pi', R] = [Pi, R] and Tr(Pi') <= m. Non-projector Pi is
/// decomposed into spectral layer projectors that are reduced one by one.
HermitianOperator canonical_reduce(const HermitianOperator& pi, const HermitianOperator& r);

/// g(x1, x2) = 2 log2(x1/x2) sqrt(x1 x2 (q - x2)(x1 - q)) / (x1 - x2),
/// on 0 <= x2 <= q <= x1 <= 1 with q <= 1/2; bounded by 6 q |log2 q|.
double g_function(double x1, double x2, double q);

struct SimBinaryBound {
  double lambda;
  double bound;  // 6 h2(p)
};

/// Maximal mixing rate of a binary-spectrum triple against the 6 h2(p)
/// bound. For p > 1/2 the transposed ensemble (same rate, same bound) is
/// used.
SimBinaryBound sim_binary_bound(const EnsembleTriple& t);

/// Builds the ensemble triple behind the entangling-to-mixing reduction:
/// p = 1/B^2, rho = rho_A (x) I/B, rho1 = rho_AB. The residual state
/// mu = (rho - p rho_AB)/(1-p) is verified positive semidefinite.
EnsembleTriple sie_reduction(const DensityMatrix& rho_ab, int dim_a, int dim_b);

struct EntanglingEmbedding {
  BipartitePureState psi;   // cut A | (B b) with A = dim, B = 2, b = dim
  HermitianOperator h_ab;   // h (x) |1><1| on A (x) B
};

/// Purified embedding of an ensemble whose entangling rate across the
/// A|(Bb) cut equals the ensemble's mixing rate under h.
EntanglingEmbedding ensemble_to_entangling_embedding(const Ensemble& e, const HermitianOperator& h);

}  // namespace ratelab
