#include "bfai/problem.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "bfai/errors.hpp"

namespace bfai {

namespace {

// Shared classification pass. `lenient` enables tie-breaking to the lowest
// index and the standardized-violation fallback when nothing is feasible;
// sigma2 may be null in strict mode.
ArmClassification classify_impl(const Matrix& mu, const Matrix* sigma2,
                                std::span<const double> gamma, bool lenient) {
  const int k = mu.rows();
  const int m = static_cast<int>(gamma.size());
  if (k < 1) throw std::invalid_argument("classify_arms: need at least one arm");
  if (mu.cols() != m + 1)
    throw std::invalid_argument("classify_arms: mean matrix must have m+1 columns");

  ArmClassification cls;
  cls.satisfied.resize(k);
  cls.violated.resize(k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < m; ++j) {
      if (mu(i, j + 1) <= gamma[j])
        cls.satisfied[i].push_back(j);
      else
        cls.violated[i].push_back(j);
    }
  }

  int best = -1;
  bool tied = false;
  for (int i = 0; i < k; ++i) {
    if (!cls.violated[i].empty()) continue;
    if (best < 0 || mu(i, 0) > mu(best, 0)) {
      best = i;
      tied = false;
    } else if (mu(i, 0) == mu(best, 0)) {
      tied = true;  // lenient mode keeps the lower index
    }
  }

  if (best < 0) {
    if (!lenient) throw NoFeasibleArmError("classify_arms: every arm violates a constraint");
    // Fall back to the least standardized violation.
    double best_score = std::numeric_limits<double>::infinity();
    for (int i = 0; i < k; ++i) {
      double score = -std::numeric_limits<double>::infinity();
      for (int j = 0; j < m; ++j) {
        double sd = std::sqrt((*sigma2)(i, j + 1));
        score = std::max(score, (mu(i, j + 1) - gamma[j]) / sd);
      }
      if (score < best_score) {
        best_score = score;
        best = i;
      }
    }
  } else if (tied && !lenient) {
    throw TiedBestError("classify_arms: feasible argmax is not unique");
  }

  cls.best = best;
  for (int i = 0; i < k; ++i) {
    if (i == best) continue;
    if (cls.violated[i].empty()) {
      cls.feasible_suboptimal.push_back(i);
    } else if (mu(i, 0) >= mu(best, 0)) {
      cls.infeasible_better.push_back(i);
    } else {
      cls.infeasible_worse.push_back(i);
    }
  }
  return cls;
}

}  // namespace

ArmClassification classify_arms(const Matrix& mu, std::span<const double> gamma) {
  return classify_impl(mu, nullptr, gamma, false);
}

ArmClassification classify_arms_lenient(const Matrix& mu, const Matrix& sigma2,
                                        std::span<const double> gamma) {
  return classify_impl(mu, &sigma2, gamma, true);
}

ProblemInstance::ProblemInstance(Matrix mu_in, Matrix sigma2_in, std::vector<double> gamma_in)
    : k(mu_in.rows()),
      m(static_cast<int>(gamma_in.size())),
      mu(std::move(mu_in)),
      sigma2(std::move(sigma2_in)),
      gamma(std::move(gamma_in)) {
  if (k < 2) throw std::invalid_argument("ProblemInstance: need at least two arms");
  if (mu.cols() != m + 1 || sigma2.rows() != k || sigma2.cols() != m + 1)
    throw std::invalid_argument("ProblemInstance: mu and sigma2 must both be k x (m+1)");
  if (!mu.all_finite() || !sigma2.all_finite())
    throw std::invalid_argument("ProblemInstance: means and variances must be finite");
  for (double g : gamma)
    if (!std::isfinite(g)) throw std::invalid_argument("ProblemInstance: thresholds must be finite");
  for (double v : sigma2.data())
    if (v <= 0.0) throw std::invalid_argument("ProblemInstance: variances must be strictly positive");
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < m; ++j)
      if (mu(i, j + 1) == gamma[j])
        throw std::invalid_argument("ProblemInstance: arm mean exactly on a constraint boundary");
  // Must have a unique best feasible arm; throws otherwise.
  classify_arms(mu, gamma);
}

}  // namespace bfai
