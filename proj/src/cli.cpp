#include "ratelab/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ratelab/entangling.hpp"
#include "ratelab/io.hpp"
#include "ratelab/solver.hpp"
#include "ratelab/verify.hpp"

namespace ratelab {

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(out_path, std::ios::binary);
  if (!file) throw ParseError("cannot write " + out_path);
  file << text;
}

json matrix_json(const HermitianOperator& m) {
  json re = json::array(), im = json::array();
  for (int i = 0; i < m.dim(); ++i) {
    json re_row = json::array(), im_row = json::array();
    for (int k = 0; k < m.dim(); ++k) {
      re_row.push_back(m.matrix()(i, k).real());
      im_row.push_back(m.matrix()(i, k).imag());
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  return json{{"dim", m.dim()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

json solve_result_json(const SolveResult& result) {
  json failures = json::array();
  for (const RestartFailure& f : result.failures) {
    failures.push_back({{"restart", f.index}, {"message", f.message}});
  }
  double best = -1.0;
  size_t best_index = 0;
  for (size_t i = 0; i < result.per_restart_values.size(); ++i) {
    if (std::isfinite(result.per_restart_values[i]) && result.per_restart_values[i] > best) {
      best = result.per_restart_values[i];
      best_index = i;
    }
  }
  return json{{"F_max", result.f_max},
              {"per_restart_values", result.per_restart_values},
              {"duality_gap", result.duality_gap},
              {"slackness", result.slackness},
              {"estimated_precision", result.estimated_precision},
              {"best_restart_trace", result.iteration_traces[best_index]},
              {"K_opt", matrix_json(result.k_opt)},
              {"Pi_opt", matrix_json(result.pi_opt)},
              {"failed_restarts", std::move(failures)}};
}

// --- rate --- //

struct RateOptions {
  std::string state_file;
  std::string ham_file;
  double lambda = -1.0;
  int d = 0;
  std::string format = "csv";
  std::string out_path;
};

int cmd_rate(const RateOptions& opt, std::ostream& out) {
  std::optional<BipartitePureState> psi;
  if (!opt.state_file.empty()) {
    psi = load_state(opt.state_file);
  } else {
    if (opt.lambda < 0.5 || opt.lambda > 1.0 || opt.d < 2) {
      throw DegenerateInputError("rate: provide --state, or --lambda in [1/2, 1] with --d >= 2");
    }
    psi = BipartitePureState::from_schmidt(binary_schmidt_spectrum(opt.lambda, opt.d), opt.d, opt.d);
  }

  double gamma;
  std::string h_opt_file;
  if (!opt.ham_file.empty()) {
    const HermitianOperator h = load_hermitian(opt.ham_file);
    gamma = entangling_rate(*psi, h);
  } else {
    const NoAncillaMaximum best = gamma_no_ancilla_max(*psi);
    gamma = best.gamma;
    h_opt_file = opt.out_path.empty() ? "h_opt.json" : opt.out_path;
    save_hermitian(best.h_opt, h_opt_file);
  }

  if (opt.format == "json") {
    json j{{"gamma", gamma}};
    if (!h_opt_file.empty()) j["h_opt_file"] = h_opt_file;
    out << j.dump(2) << "\n";
  } else {
    out << "gamma\n" << format_number(gamma) << "\n";
    if (!h_opt_file.empty()) out << "# optimal Hamiltonian written to " << h_opt_file << "\n";
  }
  return kExitOk;
}

// --- fig2 --- //

struct Fig2Options {
  int d_max = 1024;
  std::string format = "csv";
  std::string out_path;
};

int cmd_fig2(const Fig2Options& opt, std::ostream& out) {
  if (opt.d_max < 2) throw DegenerateInputError("fig2: --d must be at least 2");
  std::vector<int> d_values;
  for (int d = 2; d <= opt.d_max; d *= 2) d_values.push_back(d);
  const std::vector<Figure2Row> rows = figure2_scan(d_values);

  std::ostringstream text;
  if (opt.format == "json") {
    json arr = json::array();
    for (const Figure2Row& r : rows) {
      arr.push_back({{"d", r.d},
                     {"log2d", r.log2_d},
                     {"lambda_opt", r.lambda_opt},
                     {"gamma_d", r.gamma_d},
                     {"entropy_bits", r.entropy_bits}});
    }
    text << arr.dump(2) << "\n";
  } else {
    text << "d,log2d,lambda_opt,gamma_d,entropy_bits\n";
    for (const Figure2Row& r : rows) {
      text << r.d << "," << format_number(r.log2_d) << "," << format_number(r.lambda_opt) << ","
           << format_number(r.gamma_d) << "," << format_number(r.entropy_bits) << "\n";
    }
  }
  emit(text.str(), opt.out_path, out);
  return kExitOk;
}

// --- fig3 --- //

struct Fig3Options {
  std::vector<int> dims{4, 8};
  int p_count = 20;
  SolverConfig config;
  std::string format = "csv";
  std::string out_path;
};

int cmd_fig3(const Fig3Options& opt, std::ostream& out, std::ostream& err) {
  const Figure3Result result = figure3_scan(opt.dims, opt.p_count, opt.config);
  for (const std::string& e : result.errors) err << "fig3: " << e << "\n";

  std::ostringstream text;
  if (opt.format == "json") {
    json grids = json::array();
    for (const auto& [d, grid] : result.p_grids) grids.push_back({{"D", d}, {"p_grid", grid}});
    json arr = json::array();
    for (const Figure3Row& r : result.rows) {
      arr.push_back({{"D", r.d},
                     {"p", r.p},
                     {"F_max", r.f_max},
                     {"entropy_bits", r.entropy_bits},
                     {"precision", r.precision}});
    }
    json j{{"seed", opt.config.master_seed},
           {"iters", opt.config.inner_iterations},
           {"restarts", opt.config.restarts},
           {"p_grids", std::move(grids)},
           {"rows", std::move(arr)},
           {"errors", result.errors}};
    text << j.dump(2) << "\n";
  } else {
    text << "# seed=" << opt.config.master_seed << " iters=" << opt.config.inner_iterations
         << " restarts=" << opt.config.restarts << "\n";
    for (const auto& [d, grid] : result.p_grids) {
      text << "# D=" << d << " p_grid=";
      for (size_t i = 0; i < grid.size(); ++i) text << (i ? "," : "") << format_number(grid[i]);
      text << "\n";
    }
    text << "D,p,F_max,entropy_bits,precision\n";
    for (const Figure3Row& r : result.rows) {
      text << r.d << "," << format_number(r.p) << "," << format_number(r.f_max) << ","
           << format_number(r.entropy_bits) << "," << format_number(r.precision) << "\n";
    }
  }
  emit(text.str(), opt.out_path, out);
  return result.errors.empty() ? kExitOk : kExitNumeric;
}

// --- solve --- //

struct SolveOptions {
  int d = 0;
  std::string state_file;
  int p_count = 1;
  SolverConfig config;
  std::string out_path;
};

int cmd_solve(const SolveOptions& opt, std::ostream& out) {
  DensityMatrix rho = [&]() {
    if (!opt.state_file.empty()) return load_density(opt.state_file);
    if (opt.d < 2) throw DegenerateInputError("solve: provide --state or --d >= 2");
    return embezzling_state(opt.d);
  }();

  const RealVector ev = eigenvalues_of(rho.op());
  std::vector<double> grid;
  for (int i = 1; i < opt.p_count; ++i) grid.push_back(ev(0) + (0.5 - ev(0)) * i / opt.p_count);
  grid.push_back(0.5);

  json results = json::array();
  for (double p : grid) {
    const SolveResult res = alternate_solve(SimProblem(rho, p), opt.config);
    json entry = solve_result_json(res);
    entry["p"] = p;
    results.push_back(std::move(entry));
  }
  json j{{"seed", opt.config.master_seed},
         {"iters", opt.config.inner_iterations},
         {"restarts", opt.config.restarts},
         {"p_grid", grid},
         {"results", std::move(results)}};
  emit(j.dump(2) + "\n", opt.out_path, out);
  return kExitOk;
}

// --- verify --- //

struct VerifyOptions {
  std::string suite = "all";
  int instances = 100;
  std::uint64_t seed = 7;
  std::string format = "csv";
  std::string out_path;
};

int cmd_verify(const VerifyOptions& opt, std::ostream& out) {
  const verify::VerificationReport report = verify::run_suite(opt.suite, opt.instances, opt.seed);

  std::ostringstream text;
  if (opt.format == "json") {
    json failures = json::array();
    for (const verify::Failure& f : report.failures) {
      failures.push_back(
          {{"check", f.check}, {"instance", f.instance}, {"expected", f.expected}, {"observed", f.observed}});
    }
    json j{{"suite", report.suite},    {"instances", report.instances}, {"tested", report.tested},
           {"skipped", report.skipped}, {"failures", std::move(failures)}, {"seconds", report.seconds}};
    text << j.dump(2) << "\n";
  } else {
    text << "suite " << report.suite << ": " << report.tested << " checks, " << report.skipped
         << " skipped, " << report.failures.size() << " failures (" << format_number(report.seconds)
         << " s)\n";
    for (const verify::Failure& f : report.failures) {
      text << "FAIL " << f.check << " [" << f.instance << "] expected " << format_number(f.expected)
           << ", observed " << format_number(f.observed) << "\n";
    }
  }
  emit(text.str(), opt.out_path, out);
  return report.passed() ? kExitOk : kExitVerificationFailure;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"entangling/mixing rate toolkit"};
  app.require_subcommand(1);

  RateOptions rate;
  CLI::App* rate_cmd = app.add_subcommand("rate", "entangling rate of a state");
  rate_cmd->add_option("--state", rate.state_file, "state file (JSON)");
  rate_cmd->add_option("--ham", rate.ham_file, "Hamiltonian file (JSON)");
  rate_cmd->add_option("--lambda", rate.lambda, "top Schmidt coefficient");
  rate_cmd->add_option("--d", rate.d, "local dimension for the --lambda shorthand");
  rate_cmd->add_option("--format", rate.format)->check(CLI::IsMember({"csv", "json"}));
  rate_cmd->add_option("--out", rate.out_path, "optimal-Hamiltonian output path");

  Fig2Options fig2;
  CLI::App* fig2_cmd = app.add_subcommand("fig2", "optimal lambda and rate per dimension");
  fig2_cmd->add_option("--d", fig2.d_max, "largest dimension (powers of two up to this)");
  fig2_cmd->add_option("--format", fig2.format)->check(CLI::IsMember({"csv", "json"}));
  fig2_cmd->add_option("--out", fig2.out_path);

  Fig3Options fig3;
  CLI::App* fig3_cmd = app.add_subcommand("fig3", "maximal mixing rate sweep");
  fig3_cmd->add_option("--dims", fig3.dims, "dimensions of the average state")->delimiter(',');
  fig3_cmd->add_option("--pcount", fig3.p_count, "number of p grid points");
  fig3_cmd->add_option("--iters", fig3.config.inner_iterations);
  fig3_cmd->add_option("--restarts", fig3.config.restarts);
  fig3_cmd->add_option("--seed", fig3.config.master_seed);
  fig3_cmd->add_option("--format", fig3.format)->check(CLI::IsMember({"csv", "json"}));
  fig3_cmd->add_option("--out", fig3.out_path);

  SolveOptions solve;
  CLI::App* solve_cmd = app.add_subcommand("solve", "single maximization with full diagnostics");
  solve_cmd->add_option("--d", solve.d, "embezzling-state dimension");
  solve_cmd->add_option("--state", solve.state_file, "average state file (JSON)");
  solve_cmd->add_option("--pcount", solve.p_count);
  solve_cmd->add_option("--iters", solve.config.inner_iterations);
  solve_cmd->add_option("--restarts", solve.config.restarts);
  solve_cmd->add_option("--seed", solve.config.master_seed);
  solve_cmd->add_option("--out", solve.out_path);

  VerifyOptions verify_opt;
  CLI::App* verify_cmd = app.add_subcommand("verify", "run a property suite");
  verify_cmd->add_option("--suite", verify_opt.suite)
      ->check(CLI::IsMember(verify::suite_names()));
  verify_cmd->add_option("--instances", verify_opt.instances)->check(CLI::PositiveNumber);
  verify_cmd->add_option("--seed", verify_opt.seed);
  verify_cmd->add_option("--format", verify_opt.format)->check(CLI::IsMember({"csv", "json"}));
  verify_cmd->add_option("--out", verify_opt.out_path);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (rate_cmd->parsed()) return cmd_rate(rate, out);
    if (fig2_cmd->parsed()) return cmd_fig2(fig2, out);
    if (fig3_cmd->parsed()) return cmd_fig3(fig3, out, err);
    if (solve_cmd->parsed()) return cmd_solve(solve, out);
    if (verify_cmd->parsed()) return cmd_verify(verify_opt, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitUsage;
}

}  // namespace ratelab
