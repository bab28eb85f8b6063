#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bfai/problem.hpp"
#include "bfai/rates.hpp"
#include "bfai/sampler.hpp"

namespace bfai {

enum class Algorithm { BfaiTs, BfaiTs1, Uniform };

std::optional<Algorithm> parse_algorithm(std::string_view name);
std::string_view to_string(Algorithm algorithm);

/// State captured at a requested round of a single run.
struct Checkpoint {
  long round = 0;
  int recommendation = -1;
  std::vector<long> counts;
  std::optional<double> posterior_pfs;
};

/// Outcome of one end-to-end run at a fixed budget.
struct RunResult {
  int recommendation = -1;
  std::vector<long> counts;
  std::vector<Checkpoint> checkpoints;
  uint64_t seed = 0;
  double beta_final = 0.0;  // after any adaptive updates
};

/// Warm-up (n0 samples per arm, counted against the budget) followed by
/// sequential rounds to the budget, then the plug-in recommendation.
/// A deterministic function of its arguments. `checkpoints` asks for extra
/// snapshots; `pfs_draws` > 0 adds a posterior-PFS estimate at each one.
RunResult run_once(const ProblemInstance& instance, Algorithm algorithm,
                   const SamplerConfig& cfg, long budget, uint64_t seed,
                   std::span<const long> checkpoints = {}, long pfs_draws = 0);

/// run_once plus a full per-round record: the selection trace of every
/// post-warm-up round and a posterior snapshot after every sample.
struct TracedRun {
  RunResult result;
  std::vector<RoundTrace> rounds;
  std::vector<PathSnapshot> path;
};

TracedRun run_traced(const ProblemInstance& instance, Algorithm algorithm,
                     const SamplerConfig& cfg, long budget, uint64_t seed);

/// Runs like run_once but hands back the posterior state at the final
/// round, for diagnostics that probe a frozen mid-run belief.
PosteriorState run_to_state(const ProblemInstance& instance, Algorithm algorithm,
                            const SamplerConfig& cfg, long rounds, uint64_t seed);

/// Aggregates over replications at one budget.
struct BudgetStats {
  long budget = 0;
  double pfs = 0.0;
  double pfs_stderr = 0.0;
  std::vector<double> mean_rates;  // mean over reps of N_i / budget
};

/// Full macro-replication report. wall_seconds is diagnostic only and is
/// never serialized (output files must be byte-stable across repeat runs).
struct ExperimentReport {
  std::string experiment;
  std::string algorithm;
  std::string beta_request;  // "star", or the numeral passed in
  double beta = 0.0;         // numeric value actually used
  int n0 = 0;
  long reps = 0;
  uint64_t base_seed = 0;
  std::vector<BudgetStats> budgets;
  double wall_seconds = 0.0;
};

/// `reps` independent runs per budget, seeds derived from
/// (base_seed, budget index, replication index). The report is identical
/// for any parallelism degree and completion order.
ExperimentReport run_macro(const ProblemInstance& instance, std::string experiment_label,
                           Algorithm algorithm, const SamplerConfig& cfg,
                           std::span<const long> budgets, long reps, uint64_t base_seed,
                           int parallelism);

/// Point of the posterior false-selection curve along a deterministic
/// allocation path: Monte-Carlo 1 - P(best) plus the analytic decay rate at
/// the same state.
struct PfsCurvePoint {
  long n = 0;
  double one_minus_p = 0.0;
  double analytic_rate = 0.0;
};

/// Simulates a sample path whose counts track `alpha` (largest-remainder
/// rounding at every checkpoint; all entries must be strictly positive) and
/// estimates the posterior false-selection probability at each checkpoint
/// with `draws` posterior draws.
std::vector<PfsCurvePoint> posterior_pfs_curve(const ProblemInstance& instance,
                                               std::span<const double> alpha,
                                               std::span<const long> checkpoints, long draws,
                                               uint64_t seed);

/// Report serialization. CSV carries one row per budget with probabilities
/// at full precision so that parse(emit(report)) == report field-for-field.
std::string report_to_csv(const ExperimentReport& report);
ExperimentReport report_from_csv(std::string_view csv);
std::string report_to_json(const ExperimentReport& report);

}  // namespace bfai
