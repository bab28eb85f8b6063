#include "bfai/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bfai/errors.hpp"

namespace bfai {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Per-arm pieces of the rate term, precomputed once per solve.
struct ArmTerm {
  int arm = -1;
  bool gap_active = false;   // arm not in I_b
  bool viol_active = false;  // arm infeasible
  double gap_sq = 0.0;       // (mu_i0 - mu_b0)^2
  double s_obj = 0.0;        // sigma2_i0
  double viol = 0.0;         // sum_j (mu_ij - gamma_j)^2 / sigma2_ij
};

double eval_rate(const ArmTerm& t, double alpha, double s_best_over_beta) {
  double r = 0.0;
  if (t.gap_active && alpha > 0.0) r += t.gap_sq / (t.s_obj / alpha + s_best_over_beta);
  if (t.viol_active) r += alpha * t.viol;
  return r;
}

// Unique alpha with eval_rate(t, alpha) == c. R is strictly increasing in
// alpha, from 0 at 0+. Pure-gap arms saturate at gap_sq / s_best_over_beta,
// so callers must keep c below that ceiling for them.
double alpha_for_level(const ArmTerm& t, double c, double s_best_over_beta) {
  if (c <= 0.0) return 0.0;
  if (t.gap_active && !t.viol_active) {
    double denom = t.gap_sq / c - s_best_over_beta;
    return t.s_obj / denom;
  }
  if (!t.gap_active) {
    return c / t.viol;
  }
  // Both terms: bisect on [0, c / viol]; R(c/viol) >= c by the violation
  // term alone.
  double lo = 0.0, hi = c / t.viol;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (eval_rate(t, mid, s_best_over_beta) < c)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-16 * hi) break;
  }
  return 0.5 * (lo + hi);
}

std::vector<ArmTerm> build_terms(const Matrix& mu, const Matrix& sigma2,
                                 std::span<const double> gamma, const ArmClassification& cls) {
  const int k = mu.rows();
  const int best = cls.best;
  std::vector<ArmTerm> terms;
  terms.reserve(static_cast<size_t>(k) - 1);
  for (int i = 0; i < k; ++i) {
    if (i == best) continue;
    ArmTerm t;
    t.arm = i;
    t.viol_active = !cls.violated[static_cast<size_t>(i)].empty();
    bool in_ib = t.viol_active && mu(i, 0) >= mu(best, 0);
    t.gap_active = !in_ib;
    double gap = mu(i, 0) - mu(best, 0);
    t.gap_sq = gap * gap;
    t.s_obj = sigma2(i, 0);
    for (int j : cls.violated[static_cast<size_t>(i)]) {
      double d = mu(i, j + 1) - gamma[static_cast<size_t>(j)];
      t.viol += d * d / sigma2(i, j + 1);
    }
    terms.push_back(t);
  }
  return terms;
}

// Best arm's (unhalved) feasibility rate term at full share beta.
double best_arm_term(const Matrix& mu, const Matrix& sigma2, std::span<const double> gamma,
                     const ArmClassification& cls, double beta) {
  double r = kInf;
  for (int j : cls.satisfied[static_cast<size_t>(cls.best)]) {
    double d = mu(cls.best, j + 1) - gamma[static_cast<size_t>(j)];
    r = std::min(r, beta * d * d / sigma2(cls.best, j + 1));
  }
  return r;
}

AllocationProfile solve_impl(const Matrix& mu, const Matrix& sigma2, std::span<const double> gamma,
                             const ArmClassification& cls, double beta) {
  const int k = mu.rows();
  if (!(beta > 0.0 && beta < 1.0))
    throw std::invalid_argument("solve_allocation: beta must lie in (0, 1)");
  if (k < 2) throw DegenerateError("solve_allocation: no non-best arms to allocate over");

  const double target = 1.0 - beta;
  const double s_best_over_beta = sigma2(cls.best, 0) / beta;
  std::vector<ArmTerm> terms = build_terms(mu, sigma2, gamma, cls);

  AllocationProfile out;
  out.beta = beta;
  out.best = cls.best;
  out.alpha.assign(static_cast<size_t>(k), 0.0);
  out.r.assign(static_cast<size_t>(k), 0.0);
  out.alpha[static_cast<size_t>(cls.best)] = beta;

  // Level ceiling from pure-gap arms (their R saturates as alpha grows).
  double c_max = kInf;
  for (const ArmTerm& t : terms)
    if (t.gap_active && !t.viol_active) c_max = std::min(c_max, t.gap_sq / s_best_over_beta);

  if (c_max <= 0.0) {
    // Plug-in corner: some feasible arm ties the best exactly, so its rate
    // term is identically zero and no positive common level exists. Give the
    // zero-rate arms the whole non-best share.
    std::vector<int> flat;
    for (const ArmTerm& t : terms)
      if (t.gap_active && !t.viol_active && t.gap_sq == 0.0) flat.push_back(t.arm);
    for (int i : flat) out.alpha[static_cast<size_t>(i)] = target / static_cast<double>(flat.size());
    for (const ArmTerm& t : terms)
      out.r[static_cast<size_t>(t.arm)] =
          eval_rate(t, out.alpha[static_cast<size_t>(t.arm)], s_best_over_beta);
    out.r[static_cast<size_t>(cls.best)] = best_arm_term(mu, sigma2, gamma, cls, beta);
    out.gamma_rate = 0.0;
    return out;
  }

  auto sum_alpha = [&](double c) {
    double s = 0.0;
    for (const ArmTerm& t : terms) s += alpha_for_level(t, c, s_best_over_beta);
    return s;
  };

  // Bracket the common level, then bisect until the simplex constraint holds.
  double hi;
  if (std::isfinite(c_max)) {
    hi = c_max * (1.0 - 1e-9);
  } else {
    hi = 0.0;
    for (const ArmTerm& t : terms) hi += 1.0 / t.viol;
    hi = target / hi;  // sum of c/viol upper bounds equals target here
    int guard = 0;
    while (sum_alpha(hi) < target && ++guard < 200) hi *= 2.0;
  }
  double lo = 0.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (sum_alpha(mid) < target)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-16 * hi) break;
  }
  const double level = 0.5 * (lo + hi);

  double total = 0.0;
  for (const ArmTerm& t : terms) {
    double a = alpha_for_level(t, level, s_best_over_beta);
    out.alpha[static_cast<size_t>(t.arm)] = a;
    total += a;
  }
  // Snap onto the simplex exactly; the relative adjustment is ~1e-15.
  const double scale = target / total;
  for (const ArmTerm& t : terms) out.alpha[static_cast<size_t>(t.arm)] *= scale;

  double min_r = kInf;
  for (const ArmTerm& t : terms) {
    double r = eval_rate(t, out.alpha[static_cast<size_t>(t.arm)], s_best_over_beta);
    out.r[static_cast<size_t>(t.arm)] = r;
    min_r = std::min(min_r, r);
  }
  out.r[static_cast<size_t>(cls.best)] = best_arm_term(mu, sigma2, gamma, cls, beta);
  out.gamma_rate = 0.5 * std::min(min_r, out.r[static_cast<size_t>(cls.best)]);
  return out;
}

}  // namespace

double rate_term(const ProblemInstance& instance, const ArmClassification& cls, int arm,
                 double alpha_i, double beta) {
  if (arm == cls.best) throw BadArmError("rate_term: undefined for the best arm");
  if (arm < 0 || arm >= instance.k) throw std::invalid_argument("rate_term: arm out of range");
  if (!(alpha_i > 0.0) || !(beta > 0.0))
    throw std::invalid_argument("rate_term: alpha_i and beta must be positive");

  ArmTerm t;
  t.viol_active = !cls.violated[static_cast<size_t>(arm)].empty();
  bool in_ib = t.viol_active && instance.mu(arm, 0) >= instance.mu(cls.best, 0);
  t.gap_active = !in_ib;
  double gap = instance.mu(arm, 0) - instance.mu(cls.best, 0);
  t.gap_sq = gap * gap;
  t.s_obj = instance.sigma2(arm, 0);
  for (int j : cls.violated[static_cast<size_t>(arm)]) {
    double d = instance.mu(arm, j + 1) - instance.gamma[static_cast<size_t>(j)];
    t.viol += d * d / instance.sigma2(arm, j + 1);
  }
  return eval_rate(t, alpha_i, instance.sigma2(cls.best, 0) / beta);
}

AllocationProfile solve_allocation(const ProblemInstance& instance, double beta) {
  ArmClassification cls = classify_arms(instance.mu, instance.gamma);
  return solve_impl(instance.mu, instance.sigma2, instance.gamma, cls, beta);
}

AllocationProfile solve_allocation(const Matrix& mu, const Matrix& sigma2,
                                   std::span<const double> gamma, const ArmClassification& cls,
                                   double beta) {
  return solve_impl(mu, sigma2, gamma, cls, beta);
}

double gamma_beta(const ProblemInstance& instance, double beta) {
  return solve_allocation(instance, beta).gamma_rate;
}

BetaStar optimal_beta(const ProblemInstance& instance) {
  auto objective = [&](double b) { return gamma_beta(instance, b); };

  // Guard grid: escapes non-unimodal shapes, ties go to the smallest beta.
  double grid_best = 0.01;
  double grid_val = -kInf;
  for (int i = 1; i <= 99; ++i) {
    double b = static_cast<double>(i) / 100.0;
    double v = objective(b);
    if (v > grid_val) {
      grid_val = v;
      grid_best = b;
    }
  }

  double lo = std::max(0.01, grid_best - 0.01);
  double hi = std::min(0.99, grid_best + 0.01);
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = objective(x1);
  double f2 = objective(x2);
  while (hi - lo > 1e-4) {
    if (f1 > f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = objective(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = objective(x2);
    }
  }

  BetaStar out;
  out.beta = 0.5 * (lo + hi);
  out.profile = solve_allocation(instance, out.beta);
  return out;
}

FalseEvalRates fe_log_rate(const Matrix& mu, const Matrix& sigma2, std::span<const double> gamma,
                           std::span<const long> counts, long n) {
  const int k = mu.rows();
  if (static_cast<int>(counts.size()) != k)
    throw std::invalid_argument("fe_log_rate: counts must have one entry per arm");
  for (long c : counts)
    if (c < 1) throw std::invalid_argument("fe_log_rate: all counts must be >= 1");
  if (n < 1) throw std::invalid_argument("fe_log_rate: n must be >= 1");

  ArmClassification cls = classify_arms_lenient(mu, sigma2, gamma);
  const int best = cls.best;
  const double dn = static_cast<double>(n);

  FalseEvalRates out;
  out.per_arm.assign(static_cast<size_t>(k), 0.0);
  for (int i = 0; i < k; ++i) {
    const double ni = static_cast<double>(counts[static_cast<size_t>(i)]);
    if (i == best) {
      double r = kInf;
      for (int j : cls.satisfied[static_cast<size_t>(i)]) {
        double d = gamma[static_cast<size_t>(j)] - mu(i, j + 1);
        r = std::min(r, d * d * ni / (2.0 * sigma2(i, j + 1) * dn));
      }
      out.per_arm[static_cast<size_t>(i)] = r;
      continue;
    }
    double rate = 0.0;
    bool in_ib = !cls.violated[static_cast<size_t>(i)].empty() && mu(i, 0) >= mu(best, 0);
    if (!in_ib) {
      double gap = mu(i, 0) - mu(best, 0);
      double nb = static_cast<double>(counts[static_cast<size_t>(best)]);
      rate += gap * gap / (2.0 * (sigma2(i, 0) * dn / ni + sigma2(best, 0) * dn / nb));
    }
    for (int j : cls.violated[static_cast<size_t>(i)]) {
      double d = gamma[static_cast<size_t>(j)] - mu(i, j + 1);
      rate += d * d * ni / (2.0 * sigma2(i, j + 1) * dn);
    }
    out.per_arm[static_cast<size_t>(i)] = rate;
  }
  out.combined = *std::min_element(out.per_arm.begin(), out.per_arm.end());
  return out;
}

std::optional<long> hitting_time(std::span<const PathSnapshot> history,
                                 const ProblemInstance& instance,
                                 const AllocationProfile& profile, double epsilon) {
  const int k = instance.k;
  const int m = instance.m;
  long last_bad = 0;
  for (size_t idx = 0; idx < history.size(); ++idx) {
    const long n = static_cast<long>(idx) + 1;
    const PathSnapshot& snap = history[idx];
    bool ok = true;
    for (int i = 0; i < k && ok; ++i) {
      double share = static_cast<double>(snap.counts[static_cast<size_t>(i)]) /
                     static_cast<double>(n);
      if (std::abs(share - profile.alpha[static_cast<size_t>(i)]) > epsilon) ok = false;
      if (ok && snap.counts[static_cast<size_t>(i)] == 0 &&
          !std::isinf(epsilon)) ok = false;  // uninformed mean cannot qualify
      for (int j = 0; j <= m && ok; ++j)
        if (std::abs(snap.post_mean(i, j) - instance.mu(i, j)) > epsilon) ok = false;
    }
    if (!ok) last_bad = n;
  }
  if (last_bad == static_cast<long>(history.size())) return std::nullopt;
  return last_bad + 1;
}

std::optional<long> hitting_time(std::span<const PathSnapshot> history,
                                 const ProblemInstance& instance, double beta, double epsilon) {
  return hitting_time(history, instance, solve_allocation(instance, beta), epsilon);
}

}  // namespace bfai
