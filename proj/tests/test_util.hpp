#pragma once

#include <optional>

#include "bfai/problem.hpp"
#include "bfai/rng.hpp"

namespace bfai::testutil {

/// Random valid instance: means uniform in (-2, 2), variances in
/// [0.25, 2.25], thresholds 0. Rejection-samples until construction
/// succeeds (unique best feasible arm, nothing on a boundary).
inline ProblemInstance make_random_instance(Rng& rng, int max_k = 10, int max_m = 4) {
  for (;;) {
    int k = 2 + uniform_below(rng, max_k - 1);
    int m = uniform_below(rng, max_m + 1);
    Matrix mu(k, m + 1);
    Matrix sigma2(k, m + 1);
    for (double& v : mu.data()) v = 4.0 * uniform01(rng) - 2.0;
    for (double& v : sigma2.data()) v = 0.25 + 2.0 * uniform01(rng);
    std::vector<double> gamma(static_cast<size_t>(m), 0.0);
    try {
      return ProblemInstance(std::move(mu), std::move(sigma2), std::move(gamma));
    } catch (const std::exception&) {
      // infeasible everywhere or tied best: draw again
    }
  }
}

}  // namespace bfai::testutil
