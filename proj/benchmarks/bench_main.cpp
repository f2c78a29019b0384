// Copyright 2026 The lirelab Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <vector>

#include "lirelab/objectives.hpp"
#include "lirelab/optimizer.hpp"
#include "lirelab/policy.hpp"
#include "lirelab/rewards.hpp"
#include "lirelab/training.hpp"

using namespace lirelab;

namespace {

RewardModel pattern_rm() { return RewardModel(PatternCountReward{{{0, 1}, {2}}, 0.1, 7}); }

std::vector<ScoredPool> make_pools(const Policy& policy, std::size_t queries, std::size_t m) {
  std::vector<Query> qs;
  for (std::size_t i = 0; i < queries; ++i) {
    qs.push_back(Query{static_cast<int>(i), static_cast<int>(i % 2), {}});
  }
  Rng rng = make_rng(1);
  const auto pools = sample_pools(policy, qs, m, DecodeConfig{}, rng);
  std::vector<ScoredPool> out;
  for (const auto& p : pools) out.push_back(score_pool(pattern_rm(), p));
  return out;
}

void BM_SeqLogProbGrad(benchmark::State& state) {
  const Policy policy = Policy::random(Vocab{8, static_cast<int>(state.range(0))}, 2, 0.5, 1);
  const Query q{0, 0, {}};
  Rng rng = make_rng(2);
  const auto y = sample_response(policy, q, DecodeConfig{}, rng);
  for (auto _ : state) benchmark::DoNotOptimize(seq_log_prob_grad(policy, q, y));
}
BENCHMARK(BM_SeqLogProbGrad)->Arg(4)->Arg(16)->Arg(64);

void BM_LireGrad(benchmark::State& state) {
  const Policy policy = Policy::random(Vocab{8, 10}, 2, 0.5, 1);
  const auto pools = make_pools(policy, 1, static_cast<std::size_t>(state.range(0)));
  const ObjectiveConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(lire_grad(policy, pools[0], cfg));
}
BENCHMARK(BM_LireGrad)->Arg(2)->Arg(8)->Arg(32);

void BM_Enumerate(benchmark::State& state) {
  const Vocab vocab{4, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_responses(vocab));
}
BENCHMARK(BM_Enumerate)->Arg(5)->Arg(7)->Arg(9);

void BM_TrainEpoch(benchmark::State& state) {
  const Policy initial = Policy::random(Vocab{8, 10}, 2, 0.5, 1);
  const auto pools = make_pools(initial, 256, 4);
  TrainConfig cfg;
  cfg.threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    Policy policy = initial;
    OptimizerState opt(cfg.optimizer);
    Rng rng = make_rng(3);
    benchmark::DoNotOptimize(train_epoch(policy, pools, cfg, opt, rng, &initial));
  }
}
BENCHMARK(BM_TrainEpoch)->Arg(1)->Arg(4)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
