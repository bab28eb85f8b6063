#pragma once

#include <span>
#include <vector>

#include "bfai/matrix.hpp"

namespace bfai {

/// Ground truth for one identification problem: k arms, each with an
/// objective measure (column 0) and m constraint measures (columns 1..m),
/// all Gaussian with known variances. An arm is feasible when
/// mu(i, j) <= gamma[j - 1] for every constraint j.
///
/// Construction validates the instance: variances strictly positive, a
/// unique best feasible arm, and no mean sitting exactly on a constraint
/// boundary (behavior there is undefined, so such instances are rejected).
struct ProblemInstance {
  int k = 0;  // number of arms
  int m = 0;  // number of constraint measures
  Matrix mu;      // k x (m+1) true means
  Matrix sigma2;  // k x (m+1) sampling variances
  std::vector<double> gamma;  // m thresholds

  ProblemInstance(Matrix mu_in, Matrix sigma2_in, std::vector<double> gamma_in);
};

/// Partition of the arms relative to a mean matrix: the best feasible arm,
/// the feasible-but-suboptimal set, infeasible arms with objective at least
/// the best arm's, and infeasible arms with worse objective. Also records,
/// per arm, which constraints it satisfies and which it violates.
///
/// All indices are 0-based internally; external I/O renders them 1-based.
struct ArmClassification {
  int best = -1;
  std::vector<int> feasible_suboptimal;  // F_w
  std::vector<int> infeasible_better;    // I_b
  std::vector<int> infeasible_worse;     // I_w
  std::vector<std::vector<int>> satisfied;  // per-arm constraint indices in 0..m-1
  std::vector<std::vector<int>> violated;

  bool feasible(int arm) const { return violated[static_cast<size_t>(arm)].empty(); }
};

/// Classifies arms under the given mean matrix. Works on true means or
/// posterior means. Throws NoFeasibleArmError when every arm violates some
/// constraint and TiedBestError when the feasible argmax is not unique;
/// mid-run posterior callers should use classify_arms_lenient instead.
ArmClassification classify_arms(const Matrix& mu, std::span<const double> gamma);

/// Like classify_arms but never throws: objective ties break to the lowest
/// index, and when no arm is feasible the best slot goes to the arm with the
/// smallest standardized constraint violation
/// max_j (mu(i,j) - gamma[j-1]) / sqrt(sigma2(i,j)).
ArmClassification classify_arms_lenient(const Matrix& mu, const Matrix& sigma2,
                                        std::span<const double> gamma);

}  // namespace bfai
