#include <benchmark/benchmark.h>

#include <vector>

#include "bfai/experiments.hpp"
#include "bfai/harness.hpp"
#include "bfai/posterior.hpp"
#include "bfai/rates.hpp"
#include "bfai/rng.hpp"
#include "bfai/sampler.hpp"

namespace {

using namespace bfai;

PosteriorState warm_state(const ProblemInstance& inst, int per_arm, uint64_t seed) {
  Rng rng = make_rng(seed);
  PosteriorState state(inst);
  std::vector<double> reward(inst.m + 1);
  for (int arm = 0; arm < inst.k; ++arm)
    for (int r = 0; r < per_arm; ++r) {
      for (int j = 0; j <= inst.m; ++j)
        reward[j] = inst.mu(arm, j) + std::sqrt(inst.sigma2(arm, j)) * standard_normal(rng);
      state.update(arm, reward);
    }
  return state;
}

void BM_PosteriorUpdate(benchmark::State& bm) {
  ExperimentSpec spec = build(ExperimentId::Exp5);
  PosteriorState state(spec.instance);
  std::vector<double> reward{0.4, -0.2};
  int arm = 0;
  for (auto _ : bm) {
    state.update(arm, reward);
    arm = (arm + 1) % spec.instance.k;
  }
  bm.SetItemsProcessed(bm.iterations());
}
BENCHMARK(BM_PosteriorUpdate);

void BM_PosteriorDraw(benchmark::State& bm) {
  ExperimentSpec spec = build(ExperimentId::Exp5);
  PosteriorState state = warm_state(spec.instance, 6, 1);
  Rng rng = make_rng(2);
  for (auto _ : bm) {
    PosteriorDraw d = draw(state, rng);
    benchmark::DoNotOptimize(d.theta.data());
  }
  bm.SetItemsProcessed(bm.iterations() * spec.instance.k * (spec.instance.m + 1));
}
BENCHMARK(BM_PosteriorDraw);

void BM_EstimateP(benchmark::State& bm) {
  ExperimentSpec spec = build(ExperimentId::Exp5);
  PosteriorState state = warm_state(spec.instance, 6, 1);
  Rng rng = make_rng(3);
  const long draws = bm.range(0);
  for (auto _ : bm) {
    BestFeasibleProbs probs = estimate_p(state, spec.instance.gamma, draws, rng);
    benchmark::DoNotOptimize(probs.p.data());
  }
  bm.SetItemsProcessed(bm.iterations() * draws);
}
BENCHMARK(BM_EstimateP)->Arg(1000)->Arg(10000);

void BM_SelectArm(benchmark::State& bm) {
  ExperimentSpec spec = build(ExperimentId::Exp5);
  PosteriorState state = warm_state(spec.instance, 60, 1);
  SamplerConfig cfg;
  Rng rng = make_rng(4);
  for (auto _ : bm) {
    RoundTrace t = select_arm(state, cfg, spec.instance.gamma, rng);
    benchmark::DoNotOptimize(t.played);
  }
  bm.SetItemsProcessed(bm.iterations());
}
BENCHMARK(BM_SelectArm);

void BM_SolveAllocation(benchmark::State& bm) {
  ExperimentSpec spec =
      build(bm.range(0) == 0 ? ExperimentId::Exp5 : ExperimentId::Exp1);
  for (auto _ : bm) {
    AllocationProfile prof = solve_allocation(spec.instance, 0.5);
    benchmark::DoNotOptimize(prof.gamma_rate);
  }
}
BENCHMARK(BM_SolveAllocation)->Arg(0)->Arg(1);

void BM_OptimalBeta(benchmark::State& bm) {
  ExperimentSpec spec = build(ExperimentId::Exp5);
  for (auto _ : bm) {
    BetaStar bs = optimal_beta(spec.instance);
    benchmark::DoNotOptimize(bs.beta);
  }
}
BENCHMARK(BM_OptimalBeta);

void BM_RunOnce(benchmark::State& bm) {
  ExperimentSpec spec = build(ExperimentId::Exp5);
  SamplerConfig cfg;
  uint64_t seed = 1;
  for (auto _ : bm) {
    RunResult rr = run_once(spec.instance, Algorithm::BfaiTs, cfg, 800, seed++);
    benchmark::DoNotOptimize(rr.recommendation);
  }
  bm.SetItemsProcessed(bm.iterations() * 800);
}
BENCHMARK(BM_RunOnce);

}  // namespace

BENCHMARK_MAIN();
