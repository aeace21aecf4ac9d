#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ratelab/hermitian.hpp"
#include "ratelab/mixing.hpp"

namespace ratelab {

/// Fixed average state and mixture probability for the constrained
/// maximization of the mixing objective.
struct SimProblem {
  SimProblem(DensityMatrix rho_in, double p_in);

  DensityMatrix rho;
  double p;
};

struct SolverConfig {
  int inner_iterations = 32;  // total single-variable maximizations per restart
  int restarts = 128;
  std::uint64_t master_seed = 0;
  double lambda_tolerance = 1e-9;
  double zero_eigenspace_tolerance = 1e-8;  // relative to ||X - lambda rho||
};

struct RestartFailure {
  int index;
  std::string message;
};

struct SolveResult {
  double f_max;
  HermitianOperator k_opt;
  HermitianOperator pi_opt;
  std::vector<double> per_restart_values;            // NaN for failed restarts
  std::vector<std::vector<double>> iteration_traces;  // objective after each sub-step
  double duality_gap;       // max |Tr(X Pi) - lambda0| over all accepted Pi-steps
  double slackness;         // max complementary-slackness residual
  double estimated_precision;  // max - min over the top decile of restart values
  std::vector<RestartFailure> failures;
};

/// F(K, Pi) = 2i Tr(Pi rho^{1/2} [K, log rho] rho^{1/2}); equals the mixing
/// rate of (p, rho, Pi) under H = 2K - I.
double objective(const HermitianOperator& k, const HermitianOperator& pi, const DensityMatrix& rho);

struct KStep {
  HermitianOperator k;
  double value;
};

/// Exact maximization over 0 <= K <= I for fixed Pi: half the trace norm of
/// Z = -2i rho^{1/2} [Pi, log rho] rho^{1/2}, attained by the projector onto
/// the positive eigenspace of Z.
KStep maximize_over_k(const HermitianOperator& pi, const DensityMatrix& rho);

struct PiStep {
  HermitianOperator pi;
  double value;        // Tr(X Pi)
  double lambda0;      // dual minimum value, equals the primal optimum
  double lambda_star;  // dual minimizer
  double gap;          // |value - lambda0|
  double slack_upper;  // Tr((I - Pi) A), A = positive part of X - lambda* rho
  double slack_lower;  // Tr(Pi B),       B = negative part
};

/// Exact maximization over admissible Pi for a fixed Hermitian traceless X:
/// solves the one-dimensional convex dual min_l l(p - 1/2) + ||X - l rho||_1 / 2
/// and reconstructs Pi = P_+ + x P_0.
PiStep dual_pi_step(const HermitianOperator& x, const DensityMatrix& rho, double p, const SolverConfig& config);

/// The Pi-step of the alternating scheme: builds X = 2i rho^{1/2} [K, log rho]
/// rho^{1/2} and delegates to dual_pi_step.
PiStep maximize_over_pi(const HermitianOperator& k, const SimProblem& problem, const SolverConfig& config);

/// Alternating maximization with config.restarts random restarts merged by
/// maximum. Deterministic for a fixed master seed; restarts may run
/// concurrently.
SolveResult alternate_solve(const SimProblem& problem, const SolverConfig& config);

/// Diagonal state with eigenvalues proportional to 1/j, j = 1..dim.
DensityMatrix embezzling_state(int dim);

/// Mixing rates of a triple and of its tensor lift
/// (p, aux (x) rho, I (x) Pi) under I (x) H; equal analytically.
std::pair<double, double> lifted_rate_pair(const EnsembleTriple& t, const HermitianOperator& h,
                                           const DensityMatrix& aux);

struct TensorStability {
  double base;
  double lifted;
};

/// Solves the problem, then compares the optimum's mixing rate with the rate
/// of the same data lifted by the embezzling state of dimension d.
TensorStability tensor_stability_check(const SimProblem& problem, int d, const SolverConfig& config);

struct Figure3Row {
  int d;
  double p;
  double f_max;
  double entropy_bits;
  double precision;
};

struct Figure3Result {
  std::vector<Figure3Row> rows;
  std::vector<std::string> errors;                 // one entry per failed row
  std::vector<std::pair<int, std::vector<double>>> p_grids;  // grid used per dimension
};

/// Default grid: count evenly spaced values in (lambda_min(rho^(d)), 1/2].
std::vector<double> default_p_grid(int d, int count);

Figure3Result figure3_scan(std::span<const int> d_values, int p_count, const SolverConfig& config);
Figure3Result figure3_scan(std::span<const int> d_values, std::span<const double> p_grid,
                           const SolverConfig& config);

}  // namespace ratelab
