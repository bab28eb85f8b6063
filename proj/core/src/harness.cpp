#include "bfai/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "bfai/errors.hpp"
#include "bfai/posterior.hpp"
#include "bfai/rng.hpp"

namespace bfai {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void sample_reward(const ProblemInstance& instance, int arm, Rng& rng,
                   std::vector<double>& out) {
  const int m = instance.m;
  out.resize(static_cast<size_t>(m) + 1);
  for (int j = 0; j <= m; ++j)
    out[static_cast<size_t>(j)] =
        instance.mu(arm, j) + std::sqrt(instance.sigma2(arm, j)) * standard_normal(rng);
}

int safe_recommend(const PosteriorState& state, std::span<const double> gamma) {
  return state.all_informed() ? recommend(state, gamma) : -1;
}

RunResult run_impl(const ProblemInstance& instance, Algorithm algorithm,
                   const SamplerConfig& cfg, long budget, uint64_t seed,
                   std::span<const long> checkpoints, long pfs_draws, TracedRun* traced,
                   PosteriorState* final_state = nullptr) {
  const int k = instance.k;
  if (cfg.n0 < 1) throw std::invalid_argument("run_once: n0 must be >= 1");
  const long warmup = static_cast<long>(k) * cfg.n0;
  if (budget < warmup)
    throw BudgetTooSmallError("run_once: budget smaller than warm-up k * n0");

  SamplerConfig live = cfg;
  if (algorithm == Algorithm::BfaiTs1) live.beta = 1.0;

  std::vector<long> marks(checkpoints.begin(), checkpoints.end());
  std::sort(marks.begin(), marks.end());

  Rng rng = make_rng(seed);
  PosteriorState state(instance);
  const int true_best = classify_arms(instance.mu, instance.gamma).best;

  RunResult result;
  result.seed = seed;
  size_t next_mark = 0;

  std::vector<double> reward;
  auto record_round = [&](long t) {
    if (traced) {
      PathSnapshot snap;
      snap.counts = state.counts();
      snap.post_mean = state.means();
      traced->path.push_back(std::move(snap));
    }
    while (next_mark < marks.size() && marks[next_mark] == t) {
      Checkpoint cp;
      cp.round = t;
      cp.recommendation = safe_recommend(state, instance.gamma);
      cp.counts = state.counts();
      if (pfs_draws > 0 && state.all_informed()) {
        Rng est_rng = make_rng(derive_seed(seed, 0x6366u, static_cast<uint64_t>(t)));
        BestFeasibleProbs probs = estimate_p(state, instance.gamma, pfs_draws, est_rng);
        cp.posterior_pfs = 1.0 - probs.p[static_cast<size_t>(true_best)];
      }
      result.checkpoints.push_back(std::move(cp));
      ++next_mark;
    }
  };

  long t = 0;
  for (int arm = 0; arm < k; ++arm) {
    for (int r = 0; r < cfg.n0; ++r) {
      sample_reward(instance, arm, rng, reward);
      state.update(arm, reward);
      record_round(++t);
    }
  }

  int uniform_offset = 0;
  if (algorithm == Algorithm::Uniform) uniform_offset = uniform_below(rng, k);

  long round_index = 0;
  while (t < budget) {
    int played;
    if (algorithm == Algorithm::Uniform) {
      played = static_cast<int>((uniform_offset + round_index) % k);
      if (traced) {
        RoundTrace tr;
        tr.round = t + 1;
        tr.leader = played;
        tr.played = played;
        tr.leader_played = true;
        traced->rounds.push_back(tr);
      }
    } else {
      if (live.adaptive_beta && algorithm == Algorithm::BfaiTs && live.adapt_period > 0 &&
          round_index > 0 && round_index % live.adapt_period == 0)
        live.beta = adapt_beta(state, live.beta, instance.gamma);
      RoundTrace tr = select_arm(state, live, instance.gamma, rng);
      tr.round = t + 1;
      played = tr.played;
      if (traced) traced->rounds.push_back(tr);
    }
    sample_reward(instance, played, rng, reward);
    state.update(played, reward);
    ++round_index;
    record_round(++t);
  }

  result.recommendation = recommend(state, instance.gamma);
  result.counts = state.counts();
  result.beta_final = live.beta;
  if (final_state) *final_state = std::move(state);
  return result;
}

}  // namespace

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  if (name == "bfai-ts") return Algorithm::BfaiTs;
  if (name == "bfai-ts-1") return Algorithm::BfaiTs1;
  if (name == "uniform") return Algorithm::Uniform;
  return std::nullopt;
}

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::BfaiTs: return "bfai-ts";
    case Algorithm::BfaiTs1: return "bfai-ts-1";
    case Algorithm::Uniform: return "uniform";
  }
  return "?";
}

RunResult run_once(const ProblemInstance& instance, Algorithm algorithm,
                   const SamplerConfig& cfg, long budget, uint64_t seed,
                   std::span<const long> checkpoints, long pfs_draws) {
  return run_impl(instance, algorithm, cfg, budget, seed, checkpoints, pfs_draws, nullptr);
}

TracedRun run_traced(const ProblemInstance& instance, Algorithm algorithm,
                     const SamplerConfig& cfg, long budget, uint64_t seed) {
  TracedRun traced;
  traced.result = run_impl(instance, algorithm, cfg, budget, seed, {}, 0, &traced);
  return traced;
}

PosteriorState run_to_state(const ProblemInstance& instance, Algorithm algorithm,
                            const SamplerConfig& cfg, long rounds, uint64_t seed) {
  PosteriorState state(instance);
  run_impl(instance, algorithm, cfg, rounds, seed, {}, 0, nullptr, &state);
  return state;
}

ExperimentReport run_macro(const ProblemInstance& instance, std::string experiment_label,
                           Algorithm algorithm, const SamplerConfig& cfg,
                           std::span<const long> budgets, long reps, uint64_t base_seed,
                           int parallelism) {
  if (reps < 1) throw std::invalid_argument("run_macro: reps must be >= 1");
  if (budgets.empty()) throw std::invalid_argument("run_macro: need at least one budget");
  const auto started = std::chrono::steady_clock::now();
  const int k = instance.k;
  const int true_best = classify_arms(instance.mu, instance.gamma).best;

  struct Slot {
    unsigned char wrong = 0;
    std::vector<long> counts;
  };
  const size_t n_budgets = budgets.size();
  std::vector<Slot> slots(n_budgets * static_cast<size_t>(reps));

  // Work items are claimed by index; each derives its own stream, so any
  // schedule produces the same slots.
  std::atomic<size_t> cursor{0};
  auto worker = [&] {
    for (;;) {
      size_t idx = cursor.fetch_add(1, std::memory_order_relaxed);
      if (idx >= slots.size()) return;
      size_t b = idx / static_cast<size_t>(reps);
      size_t rep = idx % static_cast<size_t>(reps);
      uint64_t seed = derive_seed(base_seed, static_cast<uint64_t>(rep), b);
      RunResult rr = run_once(instance, algorithm, cfg, budgets[b], seed);
      slots[idx].wrong = rr.recommendation == true_best ? 0 : 1;
      slots[idx].counts = std::move(rr.counts);
    }
  };

  int threads = std::max(1, parallelism);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  ExperimentReport report;
  report.experiment = std::move(experiment_label);
  report.algorithm = std::string(to_string(algorithm));
  report.beta = algorithm == Algorithm::BfaiTs
                    ? cfg.beta
                    : (algorithm == Algorithm::BfaiTs1 ? 1.0 : 0.0);
  report.beta_request = fmt_double(report.beta);
  report.n0 = cfg.n0;
  report.reps = reps;
  report.base_seed = base_seed;
  for (size_t b = 0; b < n_budgets; ++b) {
    BudgetStats stats;
    stats.budget = budgets[b];
    long wrong = 0;
    std::vector<double> rate_sum(static_cast<size_t>(k), 0.0);
    for (long rep = 0; rep < reps; ++rep) {
      const Slot& slot = slots[b * static_cast<size_t>(reps) + static_cast<size_t>(rep)];
      wrong += slot.wrong;
      for (int i = 0; i < k; ++i)
        rate_sum[static_cast<size_t>(i)] += static_cast<double>(slot.counts[static_cast<size_t>(i)]) /
                                            static_cast<double>(budgets[b]);
    }
    stats.pfs = static_cast<double>(wrong) / static_cast<double>(reps);
    stats.pfs_stderr = std::sqrt(stats.pfs * (1.0 - stats.pfs) / static_cast<double>(reps));
    stats.mean_rates.resize(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i)
      stats.mean_rates[static_cast<size_t>(i)] =
          rate_sum[static_cast<size_t>(i)] / static_cast<double>(reps);
    report.budgets.push_back(std::move(stats));
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

std::vector<PfsCurvePoint> posterior_pfs_curve(const ProblemInstance& instance,
                                               std::span<const double> alpha,
                                               std::span<const long> checkpoints, long draws,
                                               uint64_t seed) {
  const int k = instance.k;
  if (static_cast<int>(alpha.size()) != k)
    throw std::invalid_argument("posterior_pfs_curve: alpha must have one entry per arm");
  double total = 0.0;
  for (double a : alpha) {
    if (!(a > 0.0))
      throw std::invalid_argument("posterior_pfs_curve: alpha entries must be positive");
    total += a;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("posterior_pfs_curve: alpha must sum to 1");
  if (checkpoints.empty()) return {};

  std::vector<long> marks(checkpoints.begin(), checkpoints.end());
  std::sort(marks.begin(), marks.end());

  const int true_best = classify_arms(instance.mu, instance.gamma).best;
  Rng path_rng = make_rng(derive_seed(seed, 0x7061u));
  PosteriorState state(instance);
  std::vector<double> reward;

  std::vector<PfsCurvePoint> out;
  long t = 0;
  for (size_t c = 0; c < marks.size(); ++c) {
    const long n = marks[c];
    // Fill the largest-deficit arm first until the quota for round n is met;
    // counts stay within one sample of alpha_i * n throughout.
    while (t < n) {
      int pick = 0;
      double best_deficit = -std::numeric_limits<double>::infinity();
      for (int i = 0; i < k; ++i) {
        double deficit = alpha[static_cast<size_t>(i)] * static_cast<double>(n) -
                         static_cast<double>(state.count(i));
        if (deficit > best_deficit) {
          best_deficit = deficit;
          pick = i;
        }
      }
      sample_reward(instance, pick, path_rng, reward);
      state.update(pick, reward);
      ++t;
    }
    Rng est_rng = make_rng(derive_seed(seed, 0x6573u, c));
    BestFeasibleProbs probs = estimate_p(state, instance.gamma, draws, est_rng);
    PfsCurvePoint point;
    point.n = n;
    point.one_minus_p = 1.0 - probs.p[static_cast<size_t>(true_best)];
    point.analytic_rate =
        fe_log_rate(state.means(), instance.sigma2, instance.gamma, state.counts(), n).combined;
    out.push_back(point);
  }
  return out;
}

std::string report_to_csv(const ExperimentReport& report) {
  std::ostringstream os;
  const size_t k = report.budgets.empty() ? 0 : report.budgets.front().mean_rates.size();
  os << "experiment,algorithm,beta_request,beta,n0,reps,base_seed,budget,pfs,pfs_stderr";
  for (size_t i = 1; i <= k; ++i) os << ",rate_" << i;
  os << "\n";
  for (const BudgetStats& b : report.budgets) {
    os << report.experiment << ',' << report.algorithm << ',' << report.beta_request << ','
       << fmt_double(report.beta) << ',' << report.n0 << ',' << report.reps << ','
       << report.base_seed << ',' << b.budget << ',' << fmt_double(b.pfs) << ','
       << fmt_double(b.pfs_stderr);
    for (double r : b.mean_rates) os << ',' << fmt_double(r);
    os << "\n";
  }
  return os.str();
}

ExperimentReport report_from_csv(std::string_view csv) {
  std::istringstream is{std::string(csv)};
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("report_from_csv: empty input");

  auto split = [](const std::string& s) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : s) {
      if (ch == ',') {
        parts.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(ch);
      }
    }
    parts.push_back(cur);
    return parts;
  };

  const std::vector<std::string> header = split(line);
  if (header.size() < 10 || header[0] != "experiment")
    throw std::invalid_argument("report_from_csv: unrecognized header");
  const size_t k = header.size() - 10;

  ExperimentReport report;
  bool first = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f = split(line);
    if (f.size() != header.size())
      throw std::invalid_argument("report_from_csv: malformed row '" + line + "'");
    if (first) {
      report.experiment = f[0];
      report.algorithm = f[1];
      report.beta_request = f[2];
      report.beta = std::stod(f[3]);
      report.n0 = std::stoi(f[4]);
      report.reps = std::stol(f[5]);
      report.base_seed = std::stoull(f[6]);
      first = false;
    }
    BudgetStats stats;
    stats.budget = std::stol(f[7]);
    stats.pfs = std::stod(f[8]);
    stats.pfs_stderr = std::stod(f[9]);
    for (size_t i = 0; i < k; ++i) stats.mean_rates.push_back(std::stod(f[10 + i]));
    report.budgets.push_back(std::move(stats));
  }
  return report;
}

std::string report_to_json(const ExperimentReport& report) {
  nlohmann::ordered_json j;
  j["experiment"] = report.experiment;
  j["algorithm"] = report.algorithm;
  j["beta_request"] = report.beta_request;
  j["beta"] = report.beta;
  j["n0"] = report.n0;
  j["reps"] = report.reps;
  j["base_seed"] = report.base_seed;
  j["budgets"] = nlohmann::ordered_json::array();
  for (const BudgetStats& b : report.budgets) {
    nlohmann::ordered_json jb;
    jb["budget"] = b.budget;
    jb["pfs"] = b.pfs;
    jb["pfs_stderr"] = b.pfs_stderr;
    jb["mean_rates"] = b.mean_rates;
    j["budgets"].push_back(std::move(jb));
  }
  return j.dump(2) + "\n";
}

}  // namespace bfai
