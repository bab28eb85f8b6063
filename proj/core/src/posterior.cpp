#include "bfai/posterior.hpp"

#include <cmath>
#include <stdexcept>

#include "bfai/errors.hpp"

namespace bfai {

PosteriorState::PosteriorState(Matrix sampling_var, SumMode mode)
    : k_(sampling_var.rows()),
      m_(sampling_var.cols() - 1),
      sampling_var_(std::move(sampling_var)),
      post_mean_(k_, m_ + 1),
      sums_(k_, m_ + 1),
      comp_(k_, m_ + 1),
      counts_(static_cast<size_t>(k_), 0),
      mode_(mode) {
  if (k_ < 1 || m_ < 0)
    throw std::invalid_argument("PosteriorState: variance matrix must be k x (m+1)");
  for (double v : sampling_var_.data())
    if (!(v > 0.0)) throw std::invalid_argument("PosteriorState: variances must be positive");
}

void PosteriorState::update(int arm, std::span<const double> reward) {
  if (arm < 0 || arm >= k_) throw std::invalid_argument("update: arm out of range");
  if (static_cast<int>(reward.size()) != m_ + 1)
    throw std::invalid_argument("update: reward must have m+1 entries");
  for (double x : reward)
    if (!std::isfinite(x)) throw std::invalid_argument("update: reward must be finite");

  long& n = counts_[static_cast<size_t>(arm)];
  ++n;
  ++total_;
  for (int j = 0; j <= m_; ++j) {
    if (mode_ == SumMode::Compensated) {
      double y = reward[j] - comp_(arm, j);
      double t = sums_(arm, j) + y;
      comp_(arm, j) = (t - sums_(arm, j)) - y;
      sums_(arm, j) = t;
    } else {
      sums_(arm, j) += reward[j];
    }
    post_mean_(arm, j) = sums_(arm, j) / static_cast<double>(n);
  }
}

bool PosteriorState::all_informed() const {
  for (long c : counts_)
    if (c == 0) return false;
  return true;
}

double PosteriorState::posterior_variance(int arm, int j) const {
  long n = count(arm);
  if (n == 0) throw UninformedArmError("posterior_variance: arm has no samples");
  return sampling_var_(arm, j) / static_cast<double>(n);
}

PosteriorDraw draw(const PosteriorState& state, Rng& rng) {
  const int k = state.arms();
  const int m = state.measures();
  if (!state.all_informed()) throw UninformedArmError("draw: some arm has no samples");
  PosteriorDraw out{Matrix(k, m + 1)};
  for (int i = 0; i < k; ++i) {
    const double inv_n = 1.0 / static_cast<double>(state.count(i));
    for (int j = 0; j <= m; ++j) {
      double sd = std::sqrt(state.sampling_variance(i, j) * inv_n);
      out.theta(i, j) = state.mean(i, j) + sd * standard_normal(rng);
    }
  }
  return out;
}

std::optional<int> best_feasible_of_draw(const Matrix& theta, std::span<const double> gamma) {
  const int k = theta.rows();
  const int m = static_cast<int>(gamma.size());
  int best = -1;
  for (int i = 0; i < k; ++i) {
    bool feasible = true;
    for (int j = 0; j < m; ++j) {
      if (theta(i, j + 1) > gamma[j]) {
        feasible = false;
        break;
      }
    }
    if (feasible && (best < 0 || theta(i, 0) > theta(best, 0))) best = i;
  }
  if (best < 0) return std::nullopt;
  return best;
}

BestFeasibleProbs estimate_p(const PosteriorState& state, std::span<const double> gamma,
                             long draws, Rng& rng) {
  if (draws < 1) throw std::invalid_argument("estimate_p: need at least one draw");
  if (!state.all_informed()) throw UninformedArmError("estimate_p: some arm has no samples");

  detail::FrozenDrawClassifier sampler(state, gamma);
  std::vector<long> hits(static_cast<size_t>(state.arms()), 0);
  long empty = 0;
  for (long d = 0; d < draws; ++d) {
    auto best = sampler.classify_draw(rng, -1);
    if (best.overall < 0)
      ++empty;
    else
      ++hits[static_cast<size_t>(best.overall)];
  }

  BestFeasibleProbs out;
  out.p.resize(hits.size());
  for (size_t i = 0; i < hits.size(); ++i)
    out.p[i] = static_cast<double>(hits[i]) / static_cast<double>(draws);
  out.c = static_cast<double>(empty) / static_cast<double>(draws);
  return out;
}

namespace detail {

FrozenDrawClassifier::FrozenDrawClassifier(const PosteriorState& state,
                                           std::span<const double> gamma)
    : k_(state.arms()),
      m_(static_cast<int>(gamma.size())),
      mean_(state.means().data()),
      sd_(static_cast<size_t>(k_) * (m_ + 1)),
      gamma_(gamma.begin(), gamma.end()) {
  if (!state.all_informed())
    throw UninformedArmError("FrozenDrawClassifier: some arm has no samples");
  for (int i = 0; i < k_; ++i) {
    const double inv_n = 1.0 / static_cast<double>(state.count(i));
    for (int j = 0; j <= m_; ++j)
      sd_[static_cast<size_t>(i) * (m_ + 1) + j] =
          std::sqrt(state.sampling_variance(i, j) * inv_n);
  }
}

FrozenDrawClassifier::Best FrozenDrawClassifier::classify_draw(Rng& rng, int exclude) const {
  Best out;
  double best_obj = 0.0;
  double best_excl_obj = 0.0;
  for (int i = 0; i < k_; ++i) {
    const size_t base = static_cast<size_t>(i) * (m_ + 1);
    bool feasible = true;
    for (int j = 1; j <= m_; ++j) {
      double v = mean_[base + j] + sd_[base + j] * standard_normal(rng);
      if (v > gamma_[static_cast<size_t>(j - 1)]) {
        feasible = false;
        break;
      }
    }
    if (!feasible) continue;
    double obj = mean_[base] + sd_[base] * standard_normal(rng);
    if (out.overall < 0 || obj > best_obj) {
      out.overall = i;
      best_obj = obj;
    }
    if (i != exclude && (out.excluding < 0 || obj > best_excl_obj)) {
      out.excluding = i;
      best_excl_obj = obj;
    }
  }
  return out;
}

}  // namespace detail

}  // namespace bfai
