#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ratelab/mixing.hpp"

namespace ratelab::verify {

struct Failure {
  std::string check;
  std::string instance;  // compact description of the sampled inputs
  double expected;       // bound or target value
  double observed;
};

struct CheckOutcome {
  explicit CheckOutcome(std::string name_in) : name(std::move(name_in)) {}

  std::string name;
  int tested = 0;
  int skipped = 0;
  std::vector<Failure> failures;

  void fail(const std::string& instance, double expected, double observed) {
    failures.push_back({name, instance, expected, observed});
  }
};

struct VerificationReport {
  std::string suite;
  int instances;  // requested per-check instance count
  int tested;
  int skipped;
  std::vector<Failure> failures;
  double seconds;
  bool passed() const { return failures.empty(); }
};

// An ensemble whose average state cannot support the log-based rate
// formulas; such instances are skipped, not failed.
bool degenerate_average(const Ensemble& e);

// --- identities --- //
CheckOutcome check_rank_one_identity(int instances, std::uint64_t seed);
CheckOutcome check_triple_round_trip(int instances, std::uint64_t seed);
CheckOutcome check_state_rate_derivative(int instances, double dt, double tol, std::uint64_t seed);
CheckOutcome check_ensemble_rate_derivative(int instances, double dt, double tol, std::uint64_t seed);
CheckOutcome check_embedding_identity(int instances, double tol, std::uint64_t seed);
CheckOutcome check_binary_sandwich(int instances, std::uint64_t seed);
CheckOutcome check_transpose_symmetry(int instances, std::uint64_t seed);
CheckOutcome check_tensor_lift(int instances, std::uint64_t seed);

// --- lemmas --- //
CheckOutcome check_holder(int instances, int max_dim, std::uint64_t seed);
CheckOutcome check_canonical_reduce(int instances, int max_dim, std::uint64_t seed);
CheckOutcome check_reduction_positivity(int instances, std::uint64_t seed);
CheckOutcome check_g_lemma();

// --- bounds --- //
CheckOutcome check_entropy_linear_bound();
CheckOutcome check_small_total_mixing(int instances, std::uint64_t seed);
CheckOutcome check_universal_rate_bound(int instances, std::uint64_t seed);
CheckOutcome check_binary_sim_bound(int instances, std::uint64_t seed);
CheckOutcome check_entangling_dimension_bound(int instances, std::uint64_t seed);

// --- duality --- //
CheckOutcome check_duality(int instances, std::uint64_t seed);

std::vector<std::string> suite_names();
VerificationReport run_suite(const std::string& name, int instances, std::uint64_t seed);

}  // namespace ratelab::verify
