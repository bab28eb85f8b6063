#include "bfai/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bfai/errors.hpp"
#include "bfai/rates.hpp"

namespace bfai {

namespace {

int uniform_arm_excluding(Rng& rng, int k, int exclude) {
  int idx = uniform_below(rng, k - 1);
  return idx >= exclude ? idx + 1 : idx;
}

}  // namespace

RoundTrace select_arm(const PosteriorState& state, const SamplerConfig& cfg,
                      std::span<const double> gamma, Rng& rng) {
  if (!(cfg.beta > 0.0 && cfg.beta <= 1.0))
    throw std::invalid_argument("select_arm: beta must lie in (0, 1]");
  if (cfg.resample_cap < 1)
    throw std::invalid_argument("select_arm: resample_cap must be >= 1");
  const int k = state.arms();
  detail::FrozenDrawClassifier sampler(state, gamma);

  RoundTrace trace;
  auto lead = sampler.classify_draw(rng, -1);
  trace.leader = lead.overall >= 0 ? lead.overall : uniform_below(rng, k);
  trace.leader_played = uniform01(rng) < cfg.beta;
  if (trace.leader_played) {
    trace.played = trace.leader;
    return trace;
  }

  int challenger = -1;
  detail::FrozenDrawClassifier::Best redraw{};
  for (int attempt = 1; attempt <= cfg.resample_cap; ++attempt) {
    trace.attempts = attempt;
    redraw = sampler.classify_draw(rng, trace.leader);
    int candidate = redraw.overall >= 0 ? redraw.overall
                                        : uniform_arm_excluding(rng, k, trace.leader);
    if (candidate != trace.leader) {
      challenger = candidate;
      break;
    }
  }
  if (challenger < 0) {
    // Cap exhausted: every redraw's feasible argmax was the leader. Keep the
    // conditional flavor by taking the last draw's runner-up.
    challenger = redraw.excluding >= 0 ? redraw.excluding
                                       : uniform_arm_excluding(rng, k, trace.leader);
  }
  trace.challenger = challenger;
  trace.played = challenger;
  return trace;
}

int recommend(const PosteriorState& state, std::span<const double> gamma) {
  if (!state.all_informed()) throw UninformedArmError("recommend: some arm has no samples");
  return classify_arms_lenient(state.means(), state.sampling_variances(), gamma).best;
}

PhiEstimate phi_estimate(const PosteriorState& state, const SamplerConfig& cfg,
                         std::span<const double> gamma, long draws, Rng& rng,
                         long empirical_calls) {
  const int k = state.arms();
  if (empirical_calls < 0) empirical_calls = draws;
  PhiEstimate out;
  out.probs = estimate_p(state, gamma, draws, rng);
  const double c = out.probs.c;
  const std::vector<double>& p = out.probs.p;

  out.formula.assign(static_cast<size_t>(k), 0.0);
  for (int i = 0; i < k; ++i) {
    double cross = 0.0;
    for (int j = 0; j < k; ++j) {
      if (j == i) continue;
      cross += p[static_cast<size_t>(j)] / (1.0 - p[static_cast<size_t>(j)]) * (1.0 - c) +
               c / static_cast<double>(k - 1);
    }
    out.formula[static_cast<size_t>(i)] = c / static_cast<double>(k) +
                                          (1.0 - cfg.beta) * p[static_cast<size_t>(i)] * cross +
                                          p[static_cast<size_t>(i)] * cfg.beta * (1.0 - c);
  }

  std::vector<long> plays(static_cast<size_t>(k), 0);
  for (long d = 0; d < empirical_calls; ++d) {
    RoundTrace t = select_arm(state, cfg, gamma, rng);
    ++plays[static_cast<size_t>(t.played)];
  }
  out.empirical.resize(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i)
    out.empirical[static_cast<size_t>(i)] =
        static_cast<double>(plays[static_cast<size_t>(i)]) / static_cast<double>(empirical_calls);
  return out;
}

double adapt_beta(const PosteriorState& state, double current_beta,
                  std::span<const double> gamma) {
  if (!state.all_informed()) return current_beta;
  constexpr double kStep = 0.02;
  constexpr double kLo = 0.05;
  constexpr double kHi = 0.95;

  const Matrix& mu = state.means();
  const Matrix& sigma2 = state.sampling_variances();
  ArmClassification cls = classify_arms_lenient(mu, sigma2, gamma);
  if (state.arms() < 2) return current_beta;

  auto level = [&](double b) {
    AllocationProfile prof = solve_allocation(mu, sigma2, gamma, cls, b);
    double min_r = std::numeric_limits<double>::infinity();
    for (int i = 0; i < state.arms(); ++i)
      if (i != prof.best) min_r = std::min(min_r, prof.r[static_cast<size_t>(i)]);
    return min_r;
  };

  double best_beta = std::clamp(current_beta, kLo, kHi);
  double best_val = level(best_beta);
  for (double candidate : {current_beta - kStep, current_beta + kStep}) {
    double b = std::clamp(candidate, kLo, kHi);
    if (b == best_beta) continue;
    double v = level(b);
    if (v > best_val) {
      best_val = v;
      best_beta = b;
    }
  }
  return best_beta;
}

}  // namespace bfai
