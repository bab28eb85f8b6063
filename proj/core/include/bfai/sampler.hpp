#pragma once

#include <optional>
#include <span>
#include <vector>

#include "bfai/posterior.hpp"
#include "bfai/rng.hpp"

namespace bfai {

struct SamplerConfig {
  /// Probability of playing the leader each round; 1 disables the
  /// challenger branch entirely.
  double beta = 0.5;
  /// Warm-up samples per arm before regular rounds start.
  int n0 = 6;
  /// Max challenger redraws per round. When exhausted the challenger falls
  /// back to the last draw's best feasible arm among arms != leader (the
  /// redraw loop's acceptance probability vanishes as the posterior
  /// concentrates, so an unbounded loop would stall late rounds).
  int resample_cap = 100;
  /// Enables the periodic hill-climb on beta toward the plug-in optimum.
  bool adaptive_beta = false;
  /// Rounds between beta updates when adaptive.
  int adapt_period = 50;
};

/// What happened in one selection round.
struct RoundTrace {
  long round = 0;  // filled by the driver
  int leader = -1;
  int played = -1;
  std::optional<int> challenger;
  bool leader_played = false;  // Bernoulli(beta) outcome
  int attempts = 0;            // challenger redraws consumed
};

/// One round of top-two posterior sampling: draw theta, take the feasible
/// argmax as leader (uniform arm if the draw has no feasible arm), play it
/// with probability beta, otherwise redraw until the feasible argmax
/// differs from the leader and play that challenger.
RoundTrace select_arm(const PosteriorState& state, const SamplerConfig& cfg,
                      std::span<const double> gamma, Rng& rng);

/// Plug-in recommendation: best feasible arm of the posterior-mean matrix,
/// with lenient tie/infeasibility handling.
int recommend(const PosteriorState& state, std::span<const double> gamma);

/// Selection-probability diagnostic at a frozen state: `formula` evaluates
///
///   phi_i = c/k + (1-beta) P_i sum_{i' != i} ( P_i'/(1-P_i') (1-c) + c/(k-1) )
///         + P_i beta (1-c)
///
/// from Monte-Carlo estimates (P, c), and `empirical` is the play frequency
/// over the same number of independent select_arm calls.
struct PhiEstimate {
  std::vector<double> formula;
  std::vector<double> empirical;
  BestFeasibleProbs probs;
};

/// `empirical_calls` < 0 means "use `draws` for both sides".
PhiEstimate phi_estimate(const PosteriorState& state, const SamplerConfig& cfg,
                         std::span<const double> gamma, long draws, Rng& rng,
                         long empirical_calls = -1);

/// One bounded hill-climb step on beta (step 0.02, clamped to [0.05, 0.95])
/// in the direction that increases the equalized plug-in rate level
/// min_{i != best} R_i at the plug-in optimal allocation.
double adapt_beta(const PosteriorState& state, double current_beta,
                  std::span<const double> gamma);

}  // namespace bfai
