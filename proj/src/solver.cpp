#include "ratelab/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <thread>
#include <tuple>

#include "ratelab/random.hpp"
#include "ratelab/scalars.hpp"

namespace ratelab {

namespace {

constexpr Complex kImag{0.0, 1.0};

HermitianOperator symmetrized(const ComplexMatrix& m) { return HermitianOperator(0.5 * (m + m.adjoint())); }

void require_admissible(const HermitianOperator& op, const char* what) {
  const RealVector ev = eigenvalues_of(op);
  if (ev(0) < -kTol.admissible_slack || ev(ev.size() - 1) > 1.0 + kTol.admissible_slack) {
    std::ostringstream os;
    os << what << ": spectrum [" << ev(0) << ", " << ev(ev.size() - 1) << "] outside [0, 1]";
    throw DegenerateInputError(os.str());
  }
}

// Spectral data of the fixed average state, shared by every sub-step of a
// solve.
struct ProblemContext {
  ComplexMatrix sqrt_rho;
  ComplexMatrix log_rho;

  explicit ProblemContext(const DensityMatrix& rho) {
    const MatrixLog lg = matrix_log2(rho);
    if (!lg.full_rank()) {
      throw DegenerateInputError("solver: the average state must be full rank");
    }
    sqrt_rho = matrix_sqrt(rho).matrix();
    log_rho = lg.value.matrix();
  }

  ComplexMatrix x_of(const ComplexMatrix& k) const {
    const ComplexMatrix inner = k * log_rho - log_rho * k;
    return 2.0 * kImag * (sqrt_rho * inner * sqrt_rho);
  }

  ComplexMatrix z_of(const ComplexMatrix& pi) const {
    const ComplexMatrix inner = pi * log_rho - log_rho * pi;
    return -2.0 * kImag * (sqrt_rho * inner * sqrt_rho);
  }
};

KStep k_step(const ProblemContext& ctx, const ComplexMatrix& pi) {
  const HermitianOperator z = symmetrized(ctx.z_of(pi));
  const double trace = z.matrix().trace().real();
  if (std::abs(trace) > kTol.traceless) {
    throw InternalError("maximize_over_k: Z has trace " + std::to_string(trace));
  }
  const Spectrum s = eigendecompose(z);
  const int n = z.dim();
  // Strictly positive eigenspace; the floor keeps rounding noise of an
  // all-zero Z out of K.
  const double floor = kTol.rank_cutoff * std::max(std::abs(s.eigenvalues(0)), std::abs(s.eigenvalues(n - 1)));
  ComplexMatrix k = ComplexMatrix::Zero(n, n);
  double value = 0.0;
  for (int i = 0; i < n; ++i) {
    if (s.eigenvalues(i) > floor) k += s.eigenvectors.col(i) * s.eigenvectors.col(i).adjoint();
    value += 0.5 * std::abs(s.eigenvalues(i));
  }
  if (value <= kTol.rank_cutoff) return {HermitianOperator::zero(n), value};
  return {symmetrized(k), value};
}

double dual_objective(const ComplexMatrix& x, const ComplexMatrix& rho, double p, double lambda) {
  const RealVector ev = eigenvalues_of(ComplexMatrix(x - lambda * rho));
  return lambda * (p - 0.5) + 0.5 * ev.cwiseAbs().sum();
}

struct ProjectorSplit {
  ComplexMatrix p_plus;
  ComplexMatrix p_zero;
  double trace_plus;   // Tr(P_+ rho)
  double trace_zero;   // Tr(P_0 rho)
  double slack_upper;  // positive eigenvalues classified as zero, times (1 - x)
  double slack_lower;  // |negative| eigenvalues classified as zero, times x
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;
};

ProjectorSplit split_projectors(const ComplexMatrix& m, const ComplexMatrix& rho, double zero_tol,
                                double threshold_floor) {
  const Spectrum s = eigendecompose(symmetrized(m));
  const int n = static_cast<int>(m.rows());
  const double scale = std::max(std::abs(s.eigenvalues(0)), std::abs(s.eigenvalues(n - 1)));
  const double threshold = std::max(zero_tol * scale, threshold_floor);

  ProjectorSplit out;
  out.p_plus = ComplexMatrix::Zero(n, n);
  out.p_zero = ComplexMatrix::Zero(n, n);
  out.trace_plus = 0.0;
  out.trace_zero = 0.0;
  out.slack_upper = 0.0;
  out.slack_lower = 0.0;
  out.eigenvalues = s.eigenvalues;
  out.eigenvectors = s.eigenvectors;
  for (int i = 0; i < n; ++i) {
    const ComplexVector v = s.eigenvectors.col(i);
    const double weight = (v.adjoint() * rho * v)(0, 0).real();
    if (s.eigenvalues(i) > threshold) {
      out.p_plus += v * v.adjoint();
      out.trace_plus += weight;
    } else if (s.eigenvalues(i) >= -threshold) {
      out.p_zero += v * v.adjoint();
      out.trace_zero += weight;
    }
  }
  return out;
}

PiStep pi_step_from_x(const HermitianOperator& x, const DensityMatrix& rho, double p,
                      const SolverConfig& config) {
  const ComplexMatrix& xm = x.matrix();
  const ComplexMatrix& rm = rho.matrix();
  auto f = [&](double lambda) { return dual_objective(xm, rm, p, lambda); };

  // Bracket the minimum by doubling outward until the central-difference
  // slope points inward on both sides.
  auto slope = [&](double lambda) {
    const double h = 1e-4 * std::max(1.0, std::abs(lambda));
    return (f(lambda + h) - f(lambda - h)) / (2.0 * h);
  };
  double left = -1.0, right = 1.0;
  int budget = 200;
  while (slope(left) >= 0.0 && budget-- > 0) left *= 2.0;
  while (slope(right) <= 0.0 && budget-- > 0) right *= 2.0;
  if (budget <= 0) {
    throw SolverError("dual_pi_step: bracket expansion failed, ||X|| = " + std::to_string(operator_norm(x)));
  }

  const GoldenResult dual = golden_section_minimize(f, left, right, config.lambda_tolerance);
  double lambda_star = dual.x;

  // The zero-eigenspace threshold needs an absolute floor: the minimizer is
  // known only to lambda_tolerance, which shifts eigenvalues of X - l rho by
  // up to that much times ||rho||.
  const double floor = 4.0 * config.lambda_tolerance * operator_norm(HermitianOperator(rm));
  const double zero_tol = config.zero_eigenspace_tolerance;
  auto solve_weight = [&](const ProjectorSplit& s) {
    double w = 0.0;
    if (s.trace_zero > 1e-14) w = std::clamp((p - s.trace_plus) / s.trace_zero, 0.0, 1.0);
    const double miss = std::abs(s.trace_plus + w * s.trace_zero - p);
    return std::pair<double, bool>(w, miss <= 1e-9);
  };

  ProjectorSplit split = split_projectors(xm - lambda_star * rm, rm, zero_tol, floor);
  auto [xcoef, solved] = solve_weight(split);
  if (!solved) {
    // Refine lambda by bisection on the monotone map lambda -> Tr(P_+ rho)
    // until the crossing eigenvalue is pinned inside the zero window.
    double lo = lambda_star, hi = lambda_star;
    double step = std::max(1e-6, 1e-6 * std::abs(lambda_star));
    while (split_projectors(xm - lo * rm, rm, zero_tol, floor).trace_plus < p && step < 1e12) {
      lo -= step;
      step *= 2.0;
    }
    step = std::max(1e-6, 1e-6 * std::abs(lambda_star));
    while (split_projectors(xm - hi * rm, rm, zero_tol, floor).trace_plus > p && step < 1e12) {
      hi += step;
      step *= 2.0;
    }
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (split_projectors(xm - mid * rm, rm, zero_tol, floor).trace_plus >= p) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    lambda_star = 0.5 * (lo + hi);
    split = split_projectors(xm - lambda_star * rm, rm, zero_tol, floor);
    std::tie(xcoef, solved) = solve_weight(split);
  }
  const HermitianOperator pi = symmetrized(split.p_plus + xcoef * split.p_zero);

  // Complementary slackness against the true sign split of X - lambda* rho:
  // only eigenvalues absorbed into P_0 can contribute.
  double slack_upper = 0.0, slack_lower = 0.0;
  const int n = rho.dim();
  const double scale = std::max(std::abs(split.eigenvalues(0)), std::abs(split.eigenvalues(n - 1)));
  const double threshold = std::max(zero_tol * scale, floor);
  for (int i = 0; i < n; ++i) {
    const double ev = split.eigenvalues(i);
    if (ev > 0.0 && ev <= threshold) slack_upper += ev * (1.0 - xcoef);
    if (ev < 0.0 && ev >= -threshold) slack_lower += -ev * xcoef;
  }

  const double value = trace_product(xm, pi.matrix()).real();
  const double dual_value = f(lambda_star);
  const double gap = std::abs(value - dual_value);
  if (gap > kTol.duality_gap) {
    throw SolverError("dual_pi_step: duality gap " + std::to_string(gap) + " exceeds the tolerance");
  }
  const double traced = trace_product(pi.matrix(), rm).real();
  if (std::abs(traced - p) > kTol.admissible_slack) {
    throw SolverError("dual_pi_step: Tr(Pi rho) = " + std::to_string(traced) + ", expected " +
                      std::to_string(p));
  }
  return {pi, value, dual_value, lambda_star, gap, slack_upper, slack_lower};
}

struct RestartOutcome {
  double value = std::numeric_limits<double>::quiet_NaN();
  bool failed = false;
  std::string message;
  std::vector<double> trace;
  ComplexMatrix k;
  ComplexMatrix pi;
  double max_gap = 0.0;
  double max_slack = 0.0;
};

void run_parallel(int count, const std::function<void(int)>& body) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = std::min<unsigned>(hw, static_cast<unsigned>(count));
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

// --- public surface --- //

SimProblem::SimProblem(DensityMatrix rho_in, double p_in) : rho(std::move(rho_in)), p(p_in) {
  if (p <= 0.0 || p > 0.5) throw DegenerateInputError("SimProblem: p must lie in (0, 1/2]");
}

double objective(const HermitianOperator& k, const HermitianOperator& pi, const DensityMatrix& rho) {
  if (k.dim() != rho.dim() || pi.dim() != rho.dim()) throw DimensionError("objective: dimension mismatch");
  require_admissible(k, "objective: K");
  require_admissible(pi, "objective: Pi");
  const ProblemContext ctx(rho);
  return trace_product(ctx.x_of(k.matrix()), pi.matrix()).real();
}

KStep maximize_over_k(const HermitianOperator& pi, const DensityMatrix& rho) {
  if (pi.dim() != rho.dim()) throw DimensionError("maximize_over_k: dimension mismatch");
  require_admissible(pi, "maximize_over_k: Pi");
  const ProblemContext ctx(rho);
  return k_step(ctx, pi.matrix());
}

PiStep dual_pi_step(const HermitianOperator& x, const DensityMatrix& rho, double p,
                    const SolverConfig& config) {
  if (x.dim() != rho.dim()) throw DimensionError("dual_pi_step: dimension mismatch");
  return pi_step_from_x(x, rho, p, config);
}

PiStep maximize_over_pi(const HermitianOperator& k, const SimProblem& problem, const SolverConfig& config) {
  if (k.dim() != problem.rho.dim()) throw DimensionError("maximize_over_pi: dimension mismatch");
  require_admissible(k, "maximize_over_pi: K");
  const ProblemContext ctx(problem.rho);
  return pi_step_from_x(symmetrized(ctx.x_of(k.matrix())), problem.rho, problem.p, config);
}

SolveResult alternate_solve(const SimProblem& problem, const SolverConfig& config) {
  if (config.inner_iterations < 1 || config.restarts < 1) {
    throw DegenerateInputError("alternate_solve: N and M must be at least 1");
  }
  const ProblemContext ctx(problem.rho);
  const int dim = problem.rho.dim();

  std::vector<RestartOutcome> outcomes(static_cast<size_t>(config.restarts));
  run_parallel(config.restarts, [&](int r) {
    RestartOutcome& out = outcomes[static_cast<size_t>(r)];
    try {
      Rng rng(config.master_seed, static_cast<std::uint64_t>(r));
      const int rank = rng.uniform_int(1, dim);
      ComplexMatrix k = random_projector(dim, rank, rng).matrix();
      ComplexMatrix pi;
      double previous = -std::numeric_limits<double>::infinity();
      for (int step = 0; step < config.inner_iterations; ++step) {
        double value;
        if (step % 2 == 0) {
          PiStep ps = pi_step_from_x(symmetrized(ctx.x_of(k)), problem.rho, problem.p, config);
          pi = ps.pi.matrix();
          value = ps.value;
          out.max_gap = std::max(out.max_gap, ps.gap);
          out.max_slack = std::max(out.max_slack, std::max(ps.slack_upper, ps.slack_lower));
        } else {
          KStep ks = k_step(ctx, pi);
          k = ks.k.matrix();
          value = ks.value;
        }
        if (value < previous - 1e-9) {
          throw InternalError("alternate_solve: objective decreased from " + std::to_string(previous) +
                              " to " + std::to_string(value));
        }
        previous = value;
        out.trace.push_back(value);
      }
      out.value = previous;
      out.k = k;
      out.pi = pi;
    } catch (const Error& err) {
      out.failed = true;
      out.message = err.what();
    }
  });

  SolveResult result{
      -std::numeric_limits<double>::infinity(),
      HermitianOperator::identity(dim),
      HermitianOperator::identity(dim),
      {},
      {},
      0.0,
      0.0,
      0.0,
      {}};
  int best = -1;
  std::vector<double> good;
  for (int r = 0; r < config.restarts; ++r) {
    const RestartOutcome& out = outcomes[static_cast<size_t>(r)];
    result.per_restart_values.push_back(out.value);
    result.iteration_traces.push_back(out.trace);
    if (out.failed) {
      result.failures.push_back({r, out.message});
      continue;
    }
    good.push_back(out.value);
    result.duality_gap = std::max(result.duality_gap, out.max_gap);
    result.slackness = std::max(result.slackness, out.max_slack);
    if (out.value > result.f_max) {
      result.f_max = out.value;
      best = r;
    }
  }
  if (best < 0) throw SolverError("alternate_solve: every restart failed");
  result.k_opt = symmetrized(outcomes[static_cast<size_t>(best)].k);
  result.pi_opt = symmetrized(outcomes[static_cast<size_t>(best)].pi);

  std::sort(good.begin(), good.end(), std::greater<>());
  const size_t decile = std::max<size_t>(1, good.size() / 10);
  result.estimated_precision = good.front() - good[decile - 1];
  return result;
}

DensityMatrix embezzling_state(int dim) {
  if (dim < 2) throw DegenerateInputError("embezzling_state: dim must be at least 2");
  double z = 0.0;
  for (int j = 1; j <= dim; ++j) z += 1.0 / j;
  std::vector<double> entries(static_cast<size_t>(dim));
  for (int j = 1; j <= dim; ++j) entries[static_cast<size_t>(j - 1)] = 1.0 / (j * z);
  return DensityMatrix::from_diagonal(entries);
}

std::pair<double, double> lifted_rate_pair(const EnsembleTriple& t, const HermitianOperator& h,
                                           const DensityMatrix& aux) {
  const double base = mixing_rate(t, h);
  const int da = aux.dim();
  const ComplexMatrix eye = ComplexMatrix::Identity(da, da);
  const EnsembleTriple lifted(t.p(), DensityMatrix(HermitianOperator(kron(aux.matrix(), t.rho().matrix()))),
                              HermitianOperator(kron(eye, t.pi().matrix())));
  const double lifted_rate = mixing_rate(lifted, HermitianOperator(kron(eye, h.matrix())));
  return {base, lifted_rate};
}

TensorStability tensor_stability_check(const SimProblem& problem, int d, const SolverConfig& config) {
  const SolveResult solved = alternate_solve(problem, config);
  const EnsembleTriple t(problem.p, problem.rho, solved.pi_opt);
  const HermitianOperator h(2.0 * solved.k_opt.matrix() -
                            ComplexMatrix::Identity(problem.rho.dim(), problem.rho.dim()));
  const auto [base, lifted] = lifted_rate_pair(t, h, embezzling_state(d));
  return {base, lifted};
}

std::vector<double> default_p_grid(int d, int count) {
  const RealVector ev = eigenvalues_of(embezzling_state(d).op());
  const double lo = ev(0);
  std::vector<double> grid;
  grid.reserve(static_cast<size_t>(count));
  for (int i = 1; i < count; ++i) grid.push_back(lo + (0.5 - lo) * i / count);
  grid.push_back(0.5);
  return grid;
}

Figure3Result figure3_scan(std::span<const int> d_values, int p_count, const SolverConfig& config) {
  Figure3Result out;
  for (int d : d_values) {
    const std::vector<double> grid = default_p_grid(d, p_count);
    out.p_grids.emplace_back(d, grid);
    const DensityMatrix rho = embezzling_state(d);
    for (double p : grid) {
      try {
        const SolveResult res = alternate_solve(SimProblem(rho, p), config);
        out.rows.push_back({d, p, res.f_max, binary_entropy_bits(p), res.estimated_precision});
      } catch (const Error& err) {
        std::ostringstream os;
        os << "D=" << d << " p=" << p << ": " << err.what();
        out.errors.push_back(os.str());
      }
    }
  }
  return out;
}

Figure3Result figure3_scan(std::span<const int> d_values, std::span<const double> p_grid,
                           const SolverConfig& config) {
  Figure3Result out;
  for (int d : d_values) {
    out.p_grids.emplace_back(d, std::vector<double>(p_grid.begin(), p_grid.end()));
    const DensityMatrix rho = embezzling_state(d);
    for (double p : p_grid) {
      try {
        const SolveResult res = alternate_solve(SimProblem(rho, p), config);
        out.rows.push_back({d, p, res.f_max, binary_entropy_bits(p), res.estimated_precision});
      } catch (const Error& err) {
        std::ostringstream os;
        os << "D=" << d << " p=" << p << ": " << err.what();
        out.errors.push_back(os.str());
      }
    }
  }
  return out;
}

}  // namespace ratelab
