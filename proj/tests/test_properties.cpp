// Long-run behavioral properties of the sampler: leader consistency and
// the epsilon-accuracy hitting time. Horizons are calibrated to where the
// asymptotic statements are actually measurable at desk scale.

#include <doctest.h>

#include "bfai/experiments.hpp"
#include "bfai/harness.hpp"
#include "bfai/rates.hpp"

#include <cmath>

using namespace bfai;

namespace {

double tail_leader_fraction(const ProblemInstance& inst, long n, int seeds, uint64_t base) {
  const int best = classify_arms(inst.mu, inst.gamma).best;
  double acc = 0.0;
  for (int s = 0; s < seeds; ++s) {
    SamplerConfig cfg;
    cfg.beta = 0.5;
    TracedRun tr = run_traced(inst, Algorithm::BfaiTs, cfg, n, base + static_cast<uint64_t>(s));
    const long lo = static_cast<long>(0.9 * static_cast<double>(n));
    long hits = 0, total = 0;
    for (const RoundTrace& r : tr.rounds) {
      if (r.round < lo) continue;
      ++total;
      if (r.leader == best) ++hits;
    }
    acc += static_cast<double>(hits) / static_cast<double>(total);
  }
  return acc / seeds;
}

}  // namespace

TEST_CASE("the leader settles on the true best feasible arm") {
  ExperimentSpec exp5 = build(ExperimentId::Exp5);
  CHECK(tail_leader_fraction(exp5.instance, 4000, 20, 1000) >= 0.95);

  ExperimentSpec exp1 = build(ExperimentId::Exp1);
  CHECK(tail_leader_fraction(exp1.instance, 10000, 10, 1000) >= 0.95);
}

TEST_CASE("adaptive beta climbs toward the optimal leader share") {
  ExperimentSpec spec = build(ExperimentId::Exp5);
  const double beta_star = 0.4831;
  SamplerConfig cfg;
  cfg.beta = 0.2;  // start well below the optimum
  cfg.adaptive_beta = true;
  for (uint64_t s = 0; s < 3; ++s) {
    RunResult rr = run_once(spec.instance, Algorithm::BfaiTs, cfg, 4000, 40 + s);
    CHECK(std::abs(rr.beta_final - beta_star) <= 0.1);
  }
}

TEST_CASE("epsilon-accuracy is reached in finite time on a two-arm instance") {
  // With two arms the challenger share equals the optimal allocation by
  // construction, so the hitting time isolates posterior-mean accuracy.
  ProblemInstance inst(Matrix::from_rows({{0.3, -1.0}, {0.0, -1.0}}), Matrix(2, 2, 1.0),
                       {0.0});
  int finite = 0;
  long sum_hit = 0;
  for (int s = 0; s < 20; ++s) {
    SamplerConfig cfg;
    cfg.beta = 0.5;
    TracedRun tr = run_traced(inst, Algorithm::BfaiTs, cfg, 2000, 7000 + static_cast<uint64_t>(s));
    auto hit = hitting_time(tr.path, inst, 0.5, 0.1);
    if (hit.has_value()) {
      ++finite;
      sum_hit += *hit;
    }
  }
  CHECK(finite >= 18);
  CHECK(sum_hit / finite < 2000);
}
