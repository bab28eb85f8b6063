#pragma once

#include <optional>
#include <span>
#include <vector>

#include "bfai/matrix.hpp"
#include "bfai/problem.hpp"

namespace bfai {

/// Sampling rates and rate terms for one choice of the leader share beta.
///
/// alpha has length k with alpha[best] == beta and sums to 1. r[i] for a
/// non-best arm is its (unhalved) rate term; r[best] is the best arm's
/// (unhalved) feasibility term, +inf when it has no constraints, so that
/// gamma_rate == 0.5 * min(r).
struct AllocationProfile {
  double beta = 0.0;
  int best = -1;
  std::vector<double> alpha;
  std::vector<double> r;
  double gamma_rate = 0.0;
};

/// Rate term of a non-best arm at allocation alpha_i when the best arm
/// receives share beta:
///
///   R_i = gap_i^2 / (sigma2_i0/alpha_i + sigma2_b0/beta)   [if i not in I_b]
///       + alpha_i * sum_{j violated} (mu_ij - gamma_j)^2 / sigma2_ij
///                                                          [if i infeasible]
///
/// Throws BadArmError when arm == classification.best.
double rate_term(const ProblemInstance& instance, const ArmClassification& cls, int arm,
                 double alpha_i, double beta);

/// Solves for the unique allocation of 1 - beta across the non-best arms
/// that equalizes all their rate terms. Each R_i is strictly increasing in
/// alpha_i, so for a common level c each alpha_i(c) is unique (closed form
/// for pure-gap and pure-violation arms, inner bisection for arms with
/// both terms); an outer bisection on c matches the simplex constraint.
AllocationProfile solve_allocation(const ProblemInstance& instance, double beta);

/// Plug-in variant operating on arbitrary mean/variance matrices with a
/// caller-supplied classification (posterior means mid-run, for example).
AllocationProfile solve_allocation(const Matrix& mu, const Matrix& sigma2,
                                   std::span<const double> gamma, const ArmClassification& cls,
                                   double beta);

/// Decay exponent of the posterior false-selection probability at the
/// equalized allocation for this beta: the minimum of the halved non-best
/// rate terms and the best arm's halved feasibility term.
double gamma_beta(const ProblemInstance& instance, double beta);

struct BetaStar {
  double beta = 0.0;
  AllocationProfile profile;
};

/// Maximizes gamma_beta over beta in (0, 1): a 0.01 guard grid picks the
/// basin (smallest maximizer on ties), golden-section refines it to 1e-4.
BetaStar optimal_beta(const ProblemInstance& instance);

/// Analytic per-arm false-evaluation decay rates -(1/n) log P{FE_i} at a
/// given sample-count vector, evaluated from plug-in means. `combined` is
/// the minimum over arms and tracks -(1/n) log(1 - P_{n,best}).
struct FalseEvalRates {
  std::vector<double> per_arm;
  double combined = 0.0;
};

FalseEvalRates fe_log_rate(const Matrix& mu, const Matrix& sigma2, std::span<const double> gamma,
                           std::span<const long> counts, long n);

/// Posterior means and counts after a given round; history element t-1
/// describes the state after t total samples.
struct PathSnapshot {
  std::vector<long> counts;
  Matrix post_mean;
};

/// First round t such that from t through the end of the history every
/// posterior mean is within epsilon of the truth and every sampling rate
/// N_i/n is within epsilon of the optimal allocation for this beta.
/// Returns nullopt when even the final round violates the condition.
std::optional<long> hitting_time(std::span<const PathSnapshot> history,
                                 const ProblemInstance& instance, double beta, double epsilon);
std::optional<long> hitting_time(std::span<const PathSnapshot> history,
                                 const ProblemInstance& instance,
                                 const AllocationProfile& profile, double epsilon);

}  // namespace bfai
