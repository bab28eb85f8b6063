#pragma once

#include <optional>
#include <span>
#include <vector>

#include "bfai/matrix.hpp"
#include "bfai/problem.hpp"
#include "bfai/rng.hpp"

namespace bfai {

/// Gaussian belief about a single (arm, measure) mean.
struct GaussianBelief {
  double mean = 0.0;
  double var = 0.0;
};

/// One step of the conjugate normal-normal update with a finite-variance
/// prior. The running-mean update used by PosteriorState is the
/// non-informative (infinite prior variance) specialization of this.
inline GaussianBelief conjugate_update(GaussianBelief prior, double x, double sampling_var) {
  const double prec = 1.0 / prior.var + 1.0 / sampling_var;
  return {(prior.mean / prior.var + x / sampling_var) / prec, 1.0 / prec};
}

/// Conjugate Gaussian belief state over all arms and measures under the
/// non-informative prior: after N samples of an arm the posterior for each
/// of its measures is Normal(sample mean, sampling_var / N). Arms with no
/// samples yet are "uninformed" and cannot be drawn from.
///
/// Single-owner mutable: a state may move between threads but must not be
/// shared mutably.
class PosteriorState {
 public:
  /// Either accumulate sums plainly (default) or with Kahan compensation.
  enum class SumMode { Plain, Compensated };

  explicit PosteriorState(Matrix sampling_var, SumMode mode = SumMode::Plain);
  explicit PosteriorState(const ProblemInstance& instance, SumMode mode = SumMode::Plain)
      : PosteriorState(instance.sigma2, mode) {}

  /// Folds one reward vector (length m+1, measure-major) into the arm's
  /// belief. Everything about the other arms is untouched. Rejects
  /// non-finite rewards.
  void update(int arm, std::span<const double> reward);

  int arms() const { return k_; }
  int measures() const { return m_; }
  long count(int arm) const { return counts_[static_cast<size_t>(arm)]; }
  const std::vector<long>& counts() const { return counts_; }
  long total_count() const { return total_; }
  bool informed(int arm) const { return count(arm) > 0; }
  bool all_informed() const;

  double mean(int arm, int j) const { return post_mean_(arm, j); }
  double sum(int arm, int j) const { return sums_(arm, j); }
  double sampling_variance(int arm, int j) const { return sampling_var_(arm, j); }
  /// sampling_var / count; throws UninformedArmError on a zero-count arm.
  double posterior_variance(int arm, int j) const;

  const Matrix& means() const { return post_mean_; }
  const Matrix& sums() const { return sums_; }
  const Matrix& sampling_variances() const { return sampling_var_; }

 private:
  int k_ = 0;
  int m_ = 0;
  Matrix sampling_var_;
  Matrix post_mean_;
  Matrix sums_;
  Matrix comp_;  // Kahan carry, used only in Compensated mode
  std::vector<long> counts_;
  long total_ = 0;
  SumMode mode_ = SumMode::Plain;
};

/// One joint sample from the product posterior: theta(i, j) independent
/// Normal(mean(i,j), posterior_variance(i,j)).
struct PosteriorDraw {
  Matrix theta;
};

/// Samples the full posterior matrix. Requires every arm informed.
PosteriorDraw draw(const PosteriorState& state, Rng& rng);

/// Index of the feasible arm with the largest objective entry in theta, or
/// nullopt when no arm of the draw satisfies all constraints. Exact ties
/// resolve to the lowest index.
std::optional<int> best_feasible_of_draw(const Matrix& theta, std::span<const double> gamma);

/// Monte-Carlo estimate of the posterior probabilities that each arm is the
/// best feasible one. p[i] + ... + p[k-1] + c == 1 exactly (they are counts
/// over the same draws); c is the fraction of draws whose feasible set was
/// empty.
struct BestFeasibleProbs {
  std::vector<double> p;
  double c = 0.0;
};

BestFeasibleProbs estimate_p(const PosteriorState& state, std::span<const double> gamma,
                             long draws, Rng& rng);

namespace detail {

/// Frozen-state sampler shared by estimate_p and the arm-selection loop:
/// caches posterior standard deviations once and classifies each fresh draw
/// without materializing the theta matrix. Feasibility short-circuits on the
/// first violated constraint, so engine consumption varies by draw (results
/// are still a deterministic function of the engine state).
class FrozenDrawClassifier {
 public:
  FrozenDrawClassifier(const PosteriorState& state, std::span<const double> gamma);

  struct Best {
    int overall = -1;              // best feasible arm of the draw, -1 if none
    int excluding = -1;            // best feasible arm != `exclude`, -1 if none
  };

  /// Draws one theta and returns the feasible argmax, tracking in the same
  /// pass the feasible argmax among arms other than `exclude` (pass -1 to
  /// skip that bookkeeping).
  Best classify_draw(Rng& rng, int exclude) const;

  int arms() const { return k_; }

 private:
  int k_;
  int m_;
  std::vector<double> mean_;  // row-major k x (m+1)
  std::vector<double> sd_;
  std::vector<double> gamma_;
};

}  // namespace detail

}  // namespace bfai
