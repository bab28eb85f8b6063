// Command-line front end: experiment execution, rate computation, and the
// selection-probability diagnostic.
//
//   bfai run      --experiment exp5 --algo bfai-ts --beta star
//                 --budgets 200,400,800 --reps 1000 --seed 7 --format csv
//   bfai rates    --experiment exp1
//   bfai allocate --experiment exp5 --beta 0.4831
//   bfai phi-check --experiment exp5 --rounds 600 --draws 100000 --seed 3
//
// Exit codes: 0 success, 2 usage error (bad flags or malformed instance
// file), 1 runtime failure. Diagnostics and timing go to stderr; results go
// to stdout or --output.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bfai/experiments.hpp"
#include "bfai/harness.hpp"
#include "bfai/instance_io.hpp"
#include "bfai/rates.hpp"
#include "bfai/sampler.hpp"

namespace {

using namespace bfai;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct InstanceChoice {
  ProblemInstance instance;
  std::string label;
};

InstanceChoice resolve_instance(const std::string& experiment, const std::string& path) {
  if (experiment.empty() == path.empty())
    throw UsageError("exactly one of --experiment and --instance must be given");
  if (!experiment.empty()) {
    auto id = parse_experiment_id(experiment);
    if (!id) throw UsageError("unknown experiment id '" + experiment + "'");
    return {build(*id).instance, experiment};
  }
  try {
    return {load_instance(path), path};
  } catch (const std::invalid_argument& e) {
    throw UsageError("malformed instance file '" + path + "': " + e.what());
  }
}

std::vector<long> parse_budgets(const std::string& text) {
  std::vector<long> budgets;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    try {
      size_t pos = 0;
      long value = std::stol(token, &pos);
      if (pos != token.size() || value <= 0) throw std::invalid_argument(token);
      budgets.push_back(value);
    } catch (const std::exception&) {
      throw UsageError("bad budget token '" + token + "' in --budgets");
    }
  }
  if (budgets.empty()) throw UsageError("--budgets must name at least one budget");
  return budgets;
}

void emit(const std::string& text, const std::string& output_path) {
  if (output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(output_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + output_path + "'");
  out << text;
}

std::string profile_table_csv(const AllocationProfile& prof, double beta_star, bool with_star) {
  std::ostringstream os;
  os << "arm,alpha,rate_term," << (with_star ? "beta_star" : "beta") << ",gamma_rate\n";
  for (size_t i = 0; i < prof.alpha.size(); ++i)
    os << (i + 1) << ',' << fmt_double(prof.alpha[i]) << ',' << fmt_double(prof.r[i]) << ','
       << fmt_double(with_star ? beta_star : prof.beta) << ',' << fmt_double(prof.gamma_rate)
       << "\n";
  return os.str();
}

std::string profile_table_json(const AllocationProfile& prof, double beta_star, bool with_star) {
  nlohmann::ordered_json j;
  if (with_star)
    j["beta_star"] = beta_star;
  else
    j["beta"] = prof.beta;
  j["gamma_rate"] = prof.gamma_rate;
  j["best_arm"] = prof.best + 1;
  j["alpha"] = prof.alpha;
  j["rate_terms"] = prof.r;
  return j.dump(2) + "\n";
}

int run_command(const InstanceChoice& chosen, const std::string& algo_name,
                const std::string& beta_text, const std::string& budgets_text, long reps,
                uint64_t seed, int n0, int parallelism, bool adaptive,
                const std::string& format, const std::string& output_path) {
  auto algorithm = parse_algorithm(algo_name);
  if (!algorithm) throw UsageError("unknown algorithm '" + algo_name + "'");
  std::vector<long> budgets = parse_budgets(budgets_text);

  SamplerConfig cfg;
  cfg.n0 = n0;
  cfg.adaptive_beta = adaptive;
  if (*algorithm == Algorithm::BfaiTs) {
    if (beta_text == "star") {
      cfg.beta = optimal_beta(chosen.instance).beta;
      std::fprintf(stderr, "resolved beta* = %.4f\n", cfg.beta);
    } else {
      try {
        size_t pos = 0;
        cfg.beta = std::stod(beta_text, &pos);
        if (pos != beta_text.size()) throw std::invalid_argument(beta_text);
      } catch (const std::exception&) {
        throw UsageError("bad --beta value '" + beta_text + "' (number or 'star')");
      }
      if (!(cfg.beta > 0.0 && cfg.beta <= 1.0))
        throw UsageError("--beta must lie in (0, 1] or be 'star'");
    }
  }

  auto t0 = std::chrono::steady_clock::now();
  ExperimentReport report = run_macro(chosen.instance, chosen.label, *algorithm, cfg, budgets,
                                      reps, seed, parallelism);
  report.beta_request = *algorithm == Algorithm::BfaiTs ? beta_text : report.beta_request;
  for (const BudgetStats& b : report.budgets)
    std::fprintf(stderr, "budget %ld: pfs=%.4f (stderr %.4f)\n", b.budget, b.pfs, b.pfs_stderr);
  std::fprintf(stderr, "total %.2fs\n",
               std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());

  emit(format == "json" ? report_to_json(report) : report_to_csv(report), output_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"best-feasible-arm identification via top-two posterior sampling"};
  app.require_subcommand(1);

  std::string experiment, instance_path, output_path, dump_path, format = "csv";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--experiment", experiment, "builtin experiment id (exp1..exp5, dose)");
    sub->add_option("--instance", instance_path, "path to an instance JSON file");
    sub->add_option("--output", output_path, "write results here instead of stdout");
    sub->add_option("--dump-instance", dump_path, "also write the resolved instance JSON here");
    sub->add_option("--format", format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
  };

  // run
  auto* run_cmd = app.add_subcommand("run", "macro-replicated experiment run");
  std::string algo = "bfai-ts", beta_text = "0.5", budgets_text;
  long reps = 100;
  uint64_t seed = 1;
  int n0 = 6, parallelism = 1;
  bool adaptive = false;
  add_common(run_cmd);
  run_cmd->add_option("--algo", algo, "bfai-ts | bfai-ts-1 | uniform");
  run_cmd->add_option("--beta", beta_text, "leader share in (0,1], or 'star'");
  run_cmd->add_option("--budgets", budgets_text, "comma-separated budgets")->required();
  run_cmd->add_option("--reps", reps, "replications per budget");
  run_cmd->add_option("--seed", seed, "base seed");
  run_cmd->add_option("--n0", n0, "warm-up samples per arm");
  run_cmd->add_option("--parallelism", parallelism, "worker threads");
  run_cmd->add_flag("--adaptive-beta", adaptive, "enable the periodic beta hill-climb");

  // rates
  auto* rates_cmd = app.add_subcommand("rates", "optimal beta and its allocation");
  add_common(rates_cmd);

  // allocate
  auto* alloc_cmd = app.add_subcommand("allocate", "allocation at a fixed beta");
  double alloc_beta = 0.5;
  add_common(alloc_cmd);
  alloc_cmd->add_option("--beta", alloc_beta, "leader share in (0,1)")->required();

  // phi-check
  auto* phi_cmd = app.add_subcommand("phi-check", "selection-probability diagnostic");
  double phi_beta = 0.5;
  long phi_rounds = 0, phi_draws = 100000;
  uint64_t phi_seed = 1;
  int probe_cap = 1000000;
  add_common(phi_cmd);
  phi_cmd->add_option("--beta", phi_beta, "leader share for the probe");
  phi_cmd->add_option("--rounds", phi_rounds, "rounds to advance before probing (default k*n0)");
  phi_cmd->add_option("--draws", phi_draws, "posterior draws and probe calls");
  phi_cmd->add_option("--seed", phi_seed, "seed for warm-up and probe");
  phi_cmd->add_option("--cap", probe_cap, "challenger redraw cap during the probe");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    InstanceChoice chosen = resolve_instance(experiment, instance_path);
    if (!dump_path.empty()) save_instance(chosen.instance, dump_path);
    if (run_cmd->parsed())
      return run_command(chosen, algo, beta_text, budgets_text, reps, seed, n0, parallelism,
                         adaptive, format, output_path);

    if (rates_cmd->parsed()) {
      BetaStar bs = optimal_beta(chosen.instance);
      emit(format == "json" ? profile_table_json(bs.profile, bs.beta, true)
                            : profile_table_csv(bs.profile, bs.beta, true),
           output_path);
      return 0;
    }

    if (alloc_cmd->parsed()) {
      if (!(alloc_beta > 0.0 && alloc_beta < 1.0))
        throw UsageError("--beta must lie strictly inside (0, 1)");
      AllocationProfile prof = solve_allocation(chosen.instance, alloc_beta);
      emit(format == "json" ? profile_table_json(prof, 0.0, false)
                            : profile_table_csv(prof, 0.0, false),
           output_path);
      return 0;
    }

    // phi-check
    SamplerConfig cfg;
    cfg.beta = phi_beta;
    long rounds = phi_rounds > 0 ? phi_rounds
                                 : static_cast<long>(chosen.instance.k) * cfg.n0;
    PosteriorState state =
        run_to_state(chosen.instance, Algorithm::BfaiTs, cfg, rounds, phi_seed);
    SamplerConfig probe = cfg;
    probe.resample_cap = probe_cap;
    Rng rng = make_rng(derive_seed(phi_seed, 0x7068u));
    PhiEstimate phi = phi_estimate(state, probe, chosen.instance.gamma, phi_draws, rng);
    if (format == "json") {
      nlohmann::ordered_json j;
      j["rounds"] = rounds;
      j["beta"] = phi_beta;
      j["draws"] = phi_draws;
      j["empty_feasible_fraction"] = phi.probs.c;
      j["best_feasible_prob"] = phi.probs.p;
      j["phi_formula"] = phi.formula;
      j["phi_empirical"] = phi.empirical;
      emit(j.dump(2) + "\n", output_path);
    } else {
      std::ostringstream os;
      os << "arm,p_best_feasible,phi_formula,phi_empirical,abs_diff\n";
      for (size_t i = 0; i < phi.formula.size(); ++i)
        os << (i + 1) << ',' << fmt_double(phi.probs.p[i]) << ',' << fmt_double(phi.formula[i])
           << ',' << fmt_double(phi.empirical[i]) << ','
           << fmt_double(std::abs(phi.formula[i] - phi.empirical[i])) << "\n";
      emit(os.str(), output_path);
    }
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
