#include "ratelab/verify.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "ratelab/random.hpp"
#include "ratelab/scalars.hpp"
#include "ratelab/solver.hpp"

namespace ratelab::verify {

namespace {

constexpr Complex kImag{0.0, 1.0};
constexpr double kMemberFloor = 2e-3;  // eigenvalue floor keeping log derivatives tame

std::string describe(int dim, int instance) {
  std::ostringstream os;
  os << "dim=" << dim << " instance=" << instance;
  return os.str();
}

// Entanglement entropy of the state evolved for time t by I_a (x) h (x) I_b.
double evolved_state_entropy(const BipartitePureState& psi, const HermitianOperator& h, int ancilla_a,
                             int ancilla_b, double t) {
  const ComplexMatrix u = evolution_unitary(h, t);
  const Eigen::Index block = static_cast<Eigen::Index>(h.dim()) * ancilla_b;
  ComplexVector evolved(psi.amplitudes().size());
  for (int ja = 0; ja < ancilla_a; ++ja) {
    Eigen::Map<const RowMajorMatrix> in(psi.amplitudes().data() + ja * block, h.dim(), ancilla_b);
    Eigen::Map<RowMajorMatrix> out(evolved.data() + ja * block, h.dim(), ancilla_b);
    out = u * in;
  }
  return entanglement_entropy(BipartitePureState(psi.dim_a(), psi.dim_b(), std::move(evolved)));
}

double evolved_ensemble_entropy(const Ensemble& e, const HermitianOperator& h, double t) {
  const ComplexMatrix u = evolution_unitary(h, t);
  const ComplexMatrix mixed =
      (1.0 - e.p) * e.rho0.matrix() + e.p * (u * e.rho1.matrix() * u.adjoint());
  return von_neumann_entropy_bits(DensityMatrix(HermitianOperator(0.5 * (mixed + mixed.adjoint()))));
}

}  // namespace

bool degenerate_average(const Ensemble& e) {
  const RealVector ev = eigenvalues_of(e.average().op());
  return ev(0) <= kTol.rank_cutoff;
}

// --- identities --- //

CheckOutcome check_rank_one_identity(int instances, std::uint64_t seed) {
  CheckOutcome out{"rank_one_trace_norm_identity"};
  for (int i = 0; i < instances; ++i) {
    Rng rng(seed, static_cast<std::uint64_t>(i));
    const int dim = rng.uniform_int(2, 16);
    ComplexVector psi(dim), phi(dim);
    for (int k = 0; k < dim; ++k) {
      psi(k) = Complex(rng.normal(), rng.normal());
      phi(k) = Complex(rng.normal(), rng.normal());
    }
    // General form of the identity (Re of the overlap); the modulus form
    // holds on the Hermitian-image inputs it gets applied to.
    const ComplexMatrix asym = phi * psi.adjoint() - psi * phi.adjoint();
    const double lhs = trace_norm(HermitianOperator(kImag * asym));
    const double overlap_re = psi.dot(phi).real();
    const double gram = psi.squaredNorm() * phi.squaredNorm() - overlap_re * overlap_re;
    const double rhs = 2.0 * std::sqrt(std::max(gram, 0.0));
    ++out.tested;
    if (std::abs(lhs - rhs) > 1e-9) out.fail(describe(dim, i), rhs, lhs);

    const ComplexVector phi_h = random_hermitian(dim, rng).matrix() * psi;
    const ComplexMatrix asym_h = phi_h * psi.adjoint() - psi * phi_h.adjoint();
    const double lhs_h = trace_norm(HermitianOperator(kImag * asym_h));
    const double gram_h = psi.squaredNorm() * phi_h.squaredNorm() - std::norm(psi.dot(phi_h));
    const double rhs_h = 2.0 * std::sqrt(std::max(gram_h, 0.0));
    if (std::abs(lhs_h - rhs_h) > 1e-9) out.fail(describe(dim, i) + " hermitian-image", rhs_h, lhs_h);
  }
  return out;
}

CheckOutcome check_triple_round_trip(int instances, std::uint64_t seed) {
  CheckOutcome out{"triple_round_trip"};
  for (int i = 0; i < instances; ++i) {
    Rng rng(seed, static_cast<std::uint64_t>(i));
    const int dim = rng.uniform_int(2, 6);
    const Ensemble e = random_ensemble(dim, rng, kMemberFloor);
    if (degenerate_average(e)) {
      ++out.skipped;
      continue;
    }
    const Ensemble back = triple_to_ensemble(ensemble_to_triple(e));
    const double err = std::max((back.rho0.matrix() - e.rho0.matrix()).cwiseAbs().maxCoeff(),
                                (back.rho1.matrix() - e.rho1.matrix()).cwiseAbs().maxCoeff());
    ++out.tested;
    if (err > 1e-9) out.fail(describe(dim, i), 1e-9, err);
  }
  return out;
}

CheckOutcome check_state_rate_derivative(int instances, double dt, double tol, std::uint64_t seed) {
  CheckOutcome out{"entangling_rate_vs_finite_difference"};
  for (int i = 0; i < instances; ++i) {
    Rng rng(seed, static_cast<std::uint64_t>(i));
    const int da = rng.uniform_int(2, 4);
    const int db = rng.uniform_int(2, 4);
    const BipartitePureState psi = random_pure_state(da, db, rng, 5e-3);
    const HermitianOperator h = random_unit_norm_hermitian(da * db, rng);
    const double rate = entangling_rate(psi, h);
    const double fd =
        (evolved_state_entropy(psi, h, 1, 1, dt) - evolved_state_entropy(psi, h, 1, 1, -dt)) / (2.0 * dt);
    ++out.tested;
    if (std::abs(rate - fd) > tol) out.fail(describe(da * db, i), fd, rate);
  }
  return out;
}

CheckOutcome check_ensemble_rate_derivative(int instances, double dt, double tol, std::uint64_t seed) {
  CheckOutcome out{"mixing_rate_vs_finite_difference"};
  for (int i = 0; i < instances; ++i) {
    Rng rng(seed, static_cast<std::uint64_t>(i));
    const int dim = 2 + i % 5;  // cycle dims 2..6 so each gets equal coverage
    const Ensemble e = random_ensemble(dim, rng, kMemberFloor);
    if (degenerate_average(e)) {
      ++out.skipped;
      continue;
    }
    const HermitianOperator h = random_unit_norm_hermitian(dim, rng);
    const double rate = mixing_rate(ensemble_to_triple(e), h);
    const double fd = (evolved_ensemble_entropy(e, h, dt) - evolved_ensemble_entropy(e, h, -dt)) / (2.0 * dt);
    ++out.tested;
    if (std::abs(rate - fd) > tol) out.fail(describe(dim, i), fd, rate);
  }
  return out;
}

CheckOutcome check_embedding_identity(int instances, double tol, std::uint64_t seed) {
  CheckOutcome out{"embedding_rate_identity"};
  for (int i = 0; i < instances; ++i) {
    Rng rng(seed, static_cast<std::uint64_t>(i));
    const int dim = rng.uniform_int(2, 4);
    const Ensemble e = random_ensemble(dim, rng, kMemberFloor);
    if (degenerate_average(e)) {
      ++out.skipped;
      continue;
    }
    const HermitianOperator h = random_unit_norm_hermitian(dim, rng);
    const double lambda = mixing_rate(ensemble_to_triple(e), h);
    const EntanglingEmbedding emb = ensemble_to_entangling_embedding(e, h);
    const double gamma = entangling_rate(emb.psi, emb.h_ab, 1, dim);
    ++out.tested;
    if (std::abs(gamma - lambda) > tol) out.fail(describe(dim, i), lambda, gamma);
    if (gamma > 2.0 * operator_norm(h) + 1e-9) out.fail(describe(dim, i) + " [<=2||H||]", 2.0, gamma);
  }
  return out;
}

CheckOutcome check_binary_sandwich(int instances, std::uint64_t seed) {
  CheckOutcome out{"binary_sandwich_identity"};
  for (int i = 0; i < instances; ++i) {
    Rng rng(seed, static_cast<std::uint64_t>(i));
    const int dim = rng.uniform_int(2, 12);
    const EnsembleTriple t = random_binary_triple(dim, rng);
    const SandwichIdentity sides = binary_sandwich_identity(t);
    const double err = (sides.sandwich.matrix() - sides.commutator_form.matrix()).cwiseAbs().maxCoeff();
    ++out.tested;
    if (err > 1e-9) out.fail(describe(dim, i), 1e-9, err);
  }
  return out;
}

CheckOutcome check_transpose_symmetry(int instances, std::uint64_t seed) {
  CheckOutcome out{"transpose_symmetry"};
  for (int i = 0; i < instances; ++i) {
    Rng rng(seed, static_cast<std::uint64_t>(i));
    const int dim = rng.uniform_int(2, 6);
    const Ensemble e = random_ensemble(dim, rng, kMemberFloor);
    if (degenerate_average(e)) {
      ++out.skipped;
      continue;
    }
    const HermitianOperator h = random_unit_norm_hermitian(dim, rng);
    const HermitianOperator minus_h(-h.matrix());
    const double direct = mixing_rate(ensemble_to_triple(e), h);
    const double swapped = mixing_rate(ensemble_to_triple(e.transposed()), minus_h);
    ++out.tested;
    if (std::abs(direct - swapped) > 1e-10) out.fail(describe(dim, i), direct, swapped);
  }
  return out;
}

CheckOutcome check_tensor_lift(int instances, std::uint64_t seed) {
  CheckOutcome out{"tensor_lift_rate_identity"};
  for (int i = 0; i < instances; ++i) {
    Rng rng(seed, static_cast<std::uint64_t>(i));
    const int dim = rng.uniform_int(2, 4);
    const Ensemble e = random_ensemble(dim, rng, kMemberFloor);
    if (degenerate_average(e)) {
      ++out.skipped;
      continue;
    }
    const HermitianOperator h = random_unit_norm_hermitian(dim, rng);
    const auto [base, lifted] = lifted_rate_pair(ensemble_to_triple(e), h, embezzling_state(2));
    ++out.tested;
    if (std::abs(base - lifted) > 1e-9) out.fail(describe(dim, i), base, lifted);
  }
  return out;
}

// --- lemmas --- //

CheckOutcome check_holder(int instances, int max_dim, std::uint64_t seed) {
  CheckOutcome out{"holder_commutator_bound"};
  for (int i = 0; i < instances; ++i) {
    Rng rng(seed, static_cast<std::uint64_t>(i));
    const int dim = rng.uniform_int(2, max_dim);
    const double scale = rng.uniform(0.5, 2.0);
    const HermitianOperator pi(scale * random_contraction(dim, rng).matrix());
    const HermitianOperator r = random_projector(dim, rng.uniform_int(1, dim - 1), rng);
    const HolderBound b = holder_commutator_bound(pi, r);
    ++out.tested;
    if (b.lhs > b.rhs + 1e-9) out.fail(describe(dim, i), b.rhs, b.lhs);
  }
  return out;
}

CheckOutcome check_canonical_reduce(int instances, int max_dim, std::uint64_t seed) {
  CheckOutcome out{"canonical_reduce_conditions"};
  for (int i = 0; i < instances; ++i) {
    Rng rng(seed, static_cast<std::uint64_t>(i));
    const int dim = rng.uniform_int(2, max_dim);
    const bool projector_case = rng.uniform() < 0.5;
    const HermitianOperator pi = projector_case
                                     ? random_projector(dim, rng.uniform_int(1, std::max(1, dim / 2)), rng)
                                     : random_contraction(dim, rng);
    const int rank_r = rng.uniform_int(1, dim - 1);
    const HermitianOperator r = random_projector(dim, rank_r, rng);
    const HermitianOperator reduced = canonical_reduce(pi, r);

    const double min_reduced = eigenvalues_of(reduced)(0);
    const double min_gap = eigenvalues_of(ComplexMatrix(pi.matrix() - reduced.matrix()))(0);
    const double comm_err = (commutator(pi, r) - commutator(reduced, r)).cwiseAbs().maxCoeff();
    const double trace = reduced.matrix().trace().real();
    ++out.tested;
    if (min_reduced < -1e-8) out.fail(describe(dim, i) + " (i) Pi'>=0", 0.0, min_reduced);
    if (min_gap < -1e-8) out.fail(describe(dim, i) + " (i) Pi'<=Pi", 0.0, min_gap);
    if (comm_err > 1e-8) out.fail(describe(dim, i) + " (ii) commutator", 0.0, comm_err);
    if (trace > rank_r + 1e-8) out.fail(describe(dim, i) + " (iii) trace", rank_r, trace);
  }
  return out;
}

CheckOutcome check_reduction_positivity(int instances, std::uint64_t seed) {
  CheckOutcome out{"reduction_residual_positivity"};
  for (int i = 0; i < instances; ++i) {
    Rng rng(seed, static_cast<std::uint64_t>(i));
    const int dim_a = rng.uniform_int(2, 4);
    const int dim_b = rng.uniform_int(2, 3);
    const DensityMatrix rho_ab = random_density(dim_a * dim_b, rng, 1e-4);
    const EnsembleTriple t = sie_reduction(rho_ab, dim_a, dim_b);

    const HermitianOperator rho_a = partial_trace(rho_ab.op(), dim_a, dim_b, Keep::First);
    const ComplexMatrix tau =
        kron(rho_a.matrix(), ComplexMatrix::Identity(dim_b, dim_b)) / static_cast<double>(dim_b);
    const double p = t.p();
    const ComplexMatrix mu = (tau - p * rho_ab.matrix()) / (1.0 - p);
    const double min_mu = eigenvalues_of(mu)(0);
    ++out.tested;
    if (min_mu < -1e-9) out.fail(describe(dim_a * dim_b, i) + " mu>=0", 0.0, min_mu);

    // Rate identity: the triple's mixing rate is p times the commutator form.
    const HermitianOperator h = random_unit_norm_hermitian(dim_a * dim_b, rng);
    const MatrixLog log_tau = matrix_log2(t.rho());
    const double direct =
        p * trace_product(h.matrix(), ComplexMatrix(rho_ab.matrix() * log_tau.value.matrix() -
                                                    log_tau.value.matrix() * rho_ab.matrix()))
                .imag();
    const double via_triple = mixing_rate(t, h);
    if (std::abs(direct - via_triple) > 1e-9) out.fail(describe(dim_a * dim_b, i) + " rate", direct, via_triple);
  }
  return out;
}

CheckOutcome check_g_lemma() {
  CheckOutcome out{"g_lemma_grid"};
  constexpr int kGrid = 1000;
  for (double q : {0.5, 0.25, 0.1, 0.01}) {
    double worst = 0.0;
    for (int i = 0; i <= kGrid; ++i) {
      const double x2 = q * i / kGrid;
      for (int j = 0; j <= kGrid; ++j) {
        const double x1 = q + (1.0 - q) * j / kGrid;
        worst = std::max(worst, g_function(x1, x2, q));
      }
    }
    const double bound = 6.0 * q * std::abs(std::log2(q));
    ++out.tested;
    if (worst > bound) {
      std::ostringstream os;
      os << "q=" << q;
      out.fail(os.str(), bound, worst);
    }
  }
  return out;
}

// --- bounds --- //

CheckOutcome check_entropy_linear_bound() {
  CheckOutcome out{"binary_entropy_linear_bound"};
  constexpr int kGrid = 10000;
  for (int i = 1; i <= kGrid; ++i) {
    const double x = 0.5 * i / kGrid;
    const double lhs = binary_entropy_bits(x);
    const double rhs = 2.0 * x * std::abs(std::log2(x));
    ++out.tested;
    if (lhs > rhs + 1e-12) {
      std::ostringstream os;
      os << "x=" << x;
      out.fail(os.str(), rhs, lhs);
    }
  }
  return out;
}

CheckOutcome check_small_total_mixing(int instances, std::uint64_t seed) {
  CheckOutcome out{"small_total_mixing"};
  for (int i = 0; i < instances; ++i) {
    Rng rng(seed, static_cast<std::uint64_t>(i));
    const int dim = rng.uniform_int(2, 6);
    const Ensemble e = random_ensemble(dim, rng, kMemberFloor);
    const double avg_entropy = (1.0 - e.p) * von_neumann_entropy_bits(e.rho0) +
                               e.p * von_neumann_entropy_bits(e.rho1);
    const double budget = binary_entropy_bits(e.p);
    const HermitianOperator h = random_unit_norm_hermitian(dim, rng);
    ++out.tested;
    for (double t : {0.0, 0.3, 1.1}) {
      const double s = evolved_ensemble_entropy(e, h, t);
      if (s < avg_entropy - 1e-9 || s > avg_entropy + budget + 1e-9) {
        std::ostringstream os;
        os << describe(dim, i) << " t=" << t;
        out.fail(os.str(), avg_entropy + budget, s);
      }
    }
  }
  return out;
}

CheckOutcome check_universal_rate_bound(int instances, std::uint64_t seed) {
  CheckOutcome out{"mixing_rate_universal_bound"};
  for (int i = 0; i < instances; ++i) {
    Rng rng(seed, static_cast<std::uint64_t>(i));
    const int dim = rng.uniform_int(2, 6);
    const Ensemble e = random_ensemble(dim, rng, kMemberFloor);
    if (degenerate_average(e)) {
      ++out.skipped;
      continue;
    }
    const double lambda = max_mixing_rate(ensemble_to_triple(e)).lambda;
    ++out.tested;
    if (lambda > 2.0 + 1e-9) out.fail(describe(dim, i), 2.0, lambda);
  }
  return out;
}

CheckOutcome check_binary_sim_bound(int instances, std::uint64_t seed) {
  CheckOutcome out{"binary_sim_bound"};
  for (int i = 0; i < instances; ++i) {
    Rng rng(seed, static_cast<std::uint64_t>(i));
    const int dim = rng.uniform_int(2, 12);
    const EnsembleTriple t = random_binary_triple(dim, rng);
    const SimBinaryBound b = sim_binary_bound(t);
    ++out.tested;
    if (b.lambda > b.bound + 1e-9) out.fail(describe(dim, i) + " 6h2", b.bound, b.lambda);
    if (b.lambda > 2.0 + 1e-9) out.fail(describe(dim, i) + " <=2", 2.0, b.lambda);
  }
  return out;
}

CheckOutcome check_entangling_dimension_bound(int instances, std::uint64_t seed) {
  CheckOutcome out{"entangling_dimension_bound"};
  for (int d = 2; d <= 1024; d *= 2) {
    const LambdaOptimum opt = optimize_lambda(d);
    ++out.tested;
    if (opt.gamma > 2.0 * std::log2(static_cast<double>(d)) + 1e-9) {
      std::ostringstream os;
      os << "binary family d=" << d;
      out.fail(os.str(), 2.0 * std::log2(static_cast<double>(d)), opt.gamma);
    }
  }
  for (int i = 0; i < instances; ++i) {
    Rng rng(seed, static_cast<std::uint64_t>(i));
    const int d = rng.uniform_int(2, 4);
    const BipartitePureState psi = random_pure_state(d, d, rng);
    const double gamma = gamma_no_ancilla_max(psi).gamma;
    ++out.tested;
    if (gamma > 2.0 * std::log2(static_cast<double>(d)) + 1e-9) {
      out.fail(describe(d, i), 2.0 * std::log2(static_cast<double>(d)), gamma);
    }
  }
  return out;
}

// --- duality --- //

CheckOutcome check_duality(int instances, std::uint64_t seed) {
  CheckOutcome out{"dual_step_diagnostics"};
  const SolverConfig config{};
  for (int i = 0; i < instances; ++i) {
    Rng rng(seed, static_cast<std::uint64_t>(i));
    const int dim = rng.uniform_int(2, 5);
    const DensityMatrix rho = random_density(dim, rng, 5e-3);
    const double p = rng.uniform(0.05, 0.5);
    const HermitianOperator k = random_projector(dim, rng.uniform_int(1, dim), rng);

    const ComplexMatrix sqrt_rho = matrix_sqrt(rho).matrix();
    const ComplexMatrix log_rho = matrix_log2(rho).value.matrix();
    const ComplexMatrix inner = k.matrix() * log_rho - log_rho * k.matrix();
    const ComplexMatrix xm = 2.0 * kImag * (sqrt_rho * inner * sqrt_rho);
    const HermitianOperator x(0.5 * (xm + xm.adjoint()));

    ++out.tested;
    try {
      const PiStep step = dual_pi_step(x, rho, p, config);
      if (step.gap > kTol.duality_gap) out.fail(describe(dim, i) + " gap", kTol.duality_gap, step.gap);
      const double slack = std::max(step.slack_upper, step.slack_lower);
      if (slack > 1e-6) out.fail(describe(dim, i) + " slackness", 1e-6, slack);

      // Convexity of the dual objective: sampled second differences on a
      // window around the minimizer.
      auto f = [&](double lambda) {
        const RealVector ev = eigenvalues_of(ComplexMatrix(x.matrix() - lambda * rho.matrix()));
        return lambda * (p - 0.5) + 0.5 * ev.cwiseAbs().sum();
      };
      const double width = 2.0;
      constexpr int kSamples = 41;
      std::vector<double> values(kSamples);
      for (int s = 0; s < kSamples; ++s) {
        values[static_cast<size_t>(s)] = f(step.lambda_star - width + 2.0 * width * s / (kSamples - 1));
      }
      for (int s = 1; s + 1 < kSamples; ++s) {
        const double second = values[static_cast<size_t>(s) + 1] - 2.0 * values[static_cast<size_t>(s)] +
                              values[static_cast<size_t>(s) - 1];
        if (second < -1e-8) out.fail(describe(dim, i) + " convexity", 0.0, second);
      }

      // Asymptotic slopes: p on the right, -(1-p) on the left, exact once
      // X - lambda rho is sign-definite.
      const double far = operator_norm(x) / eigenvalues_of(rho.op())(0) + 1.0;
      const double right_slope = f(far + 1.0) - f(far);
      const double left_slope = f(-far) - f(-far - 1.0);
      if (std::abs(right_slope - p) > 1e-9) out.fail(describe(dim, i) + " right slope", p, right_slope);
      if (std::abs(left_slope + (1.0 - p)) > 1e-9) {
        out.fail(describe(dim, i) + " left slope", -(1.0 - p), left_slope);
      }
    } catch (const Error&) {
      out.fail(describe(dim, i) + " solver", 0.0, 1.0);
    }
  }
  return out;
}

// --- suites --- //

std::vector<std::string> suite_names() { return {"identities", "lemmas", "bounds", "duality", "all"}; }

VerificationReport run_suite(const std::string& name, int instances, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<CheckOutcome> outcomes;

  const bool all = name == "all";
  if (name == "identities" || all) {
    outcomes.push_back(check_rank_one_identity(instances, seed));
    outcomes.push_back(check_triple_round_trip(instances, seed + 1));
    outcomes.push_back(check_state_rate_derivative(instances, 1e-5, 1e-2, seed + 2));
    outcomes.push_back(check_ensemble_rate_derivative(instances, 1e-5, 1e-2, seed + 3));
    outcomes.push_back(check_embedding_identity(instances, 1e-8, seed + 4));
    outcomes.push_back(check_binary_sandwich(instances, seed + 5));
    outcomes.push_back(check_transpose_symmetry(instances, seed + 6));
    outcomes.push_back(check_tensor_lift(instances, seed + 7));
  }
  if (name == "lemmas" || all) {
    outcomes.push_back(check_holder(instances, 12, seed + 8));
    outcomes.push_back(check_canonical_reduce(instances, 10, seed + 9));
    outcomes.push_back(check_reduction_positivity(instances, seed + 10));
    outcomes.push_back(check_g_lemma());
  }
  if (name == "bounds" || all) {
    outcomes.push_back(check_entropy_linear_bound());
    outcomes.push_back(check_small_total_mixing(instances, seed + 11));
    outcomes.push_back(check_universal_rate_bound(instances, seed + 12));
    outcomes.push_back(check_binary_sim_bound(instances, seed + 13));
    outcomes.push_back(check_entangling_dimension_bound(instances, seed + 14));
  }
  if (name == "duality" || all) {
    outcomes.push_back(check_duality(instances, seed + 15));
  }
  if (outcomes.empty()) throw DegenerateInputError("run_suite: unknown suite \"" + name + "\"");

  VerificationReport report{name, instances, 0, 0, {}, 0.0};
  for (const CheckOutcome& c : outcomes) {
    report.tested += c.tested;
    report.skipped += c.skipped;
    report.failures.insert(report.failures.end(), c.failures.begin(), c.failures.end());
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace ratelab::verify
