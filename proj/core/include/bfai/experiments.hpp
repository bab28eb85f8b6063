#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bfai/problem.hpp"

namespace bfai {

enum class ExperimentId { Exp1, Exp2, Exp3, Exp4, Exp5, Dose };

std::optional<ExperimentId> parse_experiment_id(std::string_view name);
std::string_view to_string(ExperimentId id);
std::vector<ExperimentId> all_experiment_ids();

/// One benchmark problem: the instance, its sample-size triple, the warm-up
/// depth, and the reference optimal leader share used as a regression
/// target.
struct ExperimentSpec {
  ExperimentId id;
  ProblemInstance instance;
  std::vector<long> budgets;
  int n0 = 6;
  double reference_beta_star = 0.0;
};

/// Builds the benchmark instance for `id`. Throws UnknownIdError for names
/// outside exp1..exp5 / dose (string overload).
ExperimentSpec build(ExperimentId id);
ExperimentSpec build(std::string_view name);

/// Reference false-selection probabilities for the algorithms this library
/// implements, one row per (algorithm, budget). beta < 0 encodes "optimal
/// beta" rows.
struct ReferencePfs {
  std::string algorithm;
  double beta;
  long budget;
  double pfs;
};

std::vector<ReferencePfs> published_reference(ExperimentId id);

}  // namespace bfai
