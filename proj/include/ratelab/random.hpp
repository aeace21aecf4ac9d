#pragma once

#include <cstdint>
#include <random>

#include "ratelab/entangling.hpp"
#include "ratelab/hermitian.hpp"
#include "ratelab/mixing.hpp"

namespace ratelab {

/// Seeded random stream. The two-argument form derives an independent
/// stream from (master seed, stream index), which is what keeps parallel
/// restarts and per-instance suites deterministic.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  Rng(std::uint64_t master_seed, std::uint64_t stream);

  double uniform();                    // [0, 1)
  double uniform(double lo, double hi);
  double normal();
  int uniform_int(int lo, int hi);     // inclusive bounds

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

ComplexMatrix random_complex_gaussian(int rows, int cols, Rng& rng);
ComplexMatrix random_unitary(int dim, Rng& rng);

HermitianOperator random_hermitian(int dim, Rng& rng);
HermitianOperator random_unit_norm_hermitian(int dim, Rng& rng);
HermitianOperator random_projector(int dim, int rank, Rng& rng);

/// Random 0 <= Pi <= I with eigenvalues uniform on [0, 1].
HermitianOperator random_contraction(int dim, Rng& rng);

/// Wishart state, optionally mixed toward the identity until the smallest
/// eigenvalue is at least min_eigenvalue.
DensityMatrix random_density(int dim, Rng& rng, double min_eigenvalue = 0.0);

/// Haar-like pure state; when min_schmidt > 0, resampled until the smallest
/// Schmidt coefficient clears the floor.
BipartitePureState random_pure_state(int dim_a, int dim_b, Rng& rng, double min_schmidt = 0.0);

Ensemble random_ensemble(int dim, Rng& rng, double min_member_eigenvalue = 0.0);

/// Binary-spectrum state: multiplicity m for the larger eigenvalue, random
/// eigenbasis, eigenvalue ratio log-uniform in [1.5, 50].
DensityMatrix random_binary_density(int dim, int multiplicity_high, Rng& rng);

/// Random admissible Pi for the given state: a random contraction moved
/// along a straight line (toward 0 or toward I) until Tr(Pi rho) = p.
HermitianOperator random_admissible_pi(const DensityMatrix& rho, double p, Rng& rng);

/// Binary-spectrum triple with p log-uniform in [0.005, p_max].
EnsembleTriple random_binary_triple(int dim, Rng& rng, double p_max = 0.5);

}  // namespace ratelab
