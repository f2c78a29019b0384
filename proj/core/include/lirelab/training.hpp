// Copyright 2026 The lirelab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "lirelab/objectives.hpp"
#include "lirelab/optimizer.hpp"
#include "lirelab/policy.hpp"
#include "lirelab/rewards.hpp"

namespace lirelab {

/// Training objective. `lire` is the listwise loss plus alpha * SFT.
enum class Method { lire, pg, dpo, sft };

std::string_view to_string(Method method);
Method parse_method(std::string_view text);

struct TrainConfig {
  Method method = Method::lire;
  ObjectiveConfig objective;
  OptimizerConfig optimizer;
  std::size_t batch_size = 16;  // pools per update; 0 = full batch
  std::uint64_t seed = 0;
  int threads = 1;  // per-pool gradients fan out over this many workers

  void validate() const;
};

/// Mean loss of `method` over a batch of pools.
///
/// lire: combined_loss. pg: every response with its raw reward. dpo: one
/// (y_w, y_l) pair per pool against `reference`. sft: one target per pool.
/// With threads > 1 the batch is split into contiguous chunks whose partial
/// sums are reduced in chunk order, so results depend on the thread count
/// only through floating-point summation order.
LossReport batch_loss(Method method, const Policy& policy, const Policy* reference,
                      std::span<const ScoredPool> pools, const ObjectiveConfig& cfg,
                      int threads = 1);

struct EpochMetrics {
  double mean_loss = 0.0;
  /// Mean over pools of sum_j P_j * raw_reward_j at the pre-update parameters.
  double mean_pool_reward = 0.0;
  std::size_t steps = 0;
};

/// One pass over `pools` in an order shuffled by `rng`, one optimizer step
/// per mini-batch.
EpochMetrics train_epoch(Policy& policy, std::span<const ScoredPool> pools,
                         const TrainConfig& cfg, OptimizerState& opt, Rng& rng,
                         const Policy* reference = nullptr);

struct TrainPlan {
  int evolve_steps = 1;            // E
  int iterate_steps = 3;           // I
  std::size_t pool_size = 2;       // M when pools are sampled from bare queries
  TrainConfig train;
  DecodeConfig sampling;           // how fresh responses are drawn
  std::size_t eval_samples = 256;  // Monte Carlo fallback for the reward trace

  void validate() const;
};

struct TraceRow {
  int evolve = 0;
  int iterate = 0;
  double mean_loss = 0.0;
  double mean_pool_reward = 0.0;
  /// Expected RM reward of the current policy over the training queries.
  double expected_reward = 0.0;
};

struct SelfEnhanceResult {
  Policy policy;
  std::vector<TraceRow> trace;
};

/// Called after every (evolve, iterate) cell, both 1-based.
using CheckpointFn = std::function<void(int evolve, int iterate, const Policy& policy)>;

/// Generator used to draw the responses of Evolve step `evolve` (1-based).
Rng evolve_sampling_rng(std::uint64_t seed, int evolve);
/// Generator that shuffles pools across every epoch of a run.
Rng shuffle_rng(std::uint64_t seed);

/// M model samples for every query.
std::vector<CandidatePool> sample_pools(const Policy& policy, std::span<const Query> queries,
                                        std::size_t pool_size, const DecodeConfig& sampling,
                                        Rng& rng);

/// Evolve/Iterate loop starting from bare queries: every Evolve step samples
/// a fresh pool of M responses per query from the current policy and scores
/// it, then runs I epochs. Adam moments are reset at each Evolve step.
SelfEnhanceResult self_enhance(const Policy& initial, std::span<const Query> queries,
                               const RewardModel& rm, const TrainPlan& plan,
                               const CheckpointFn& checkpoint = {});

/// Same loop over prepared pools. The first Evolve step trains on `pools` as
/// given; later steps keep human-labeled entries and replace model samples
/// with fresh draws from the current policy, then rescore.
SelfEnhanceResult self_enhance(const Policy& initial, std::span<const CandidatePool> pools,
                               const RewardModel& rm, const TrainPlan& plan,
                               const CheckpointFn& checkpoint = {});

/// Replaces the pool's model-sample entries, in order, with `fresh`. Human
/// entries are kept as they are and the fresh entries carry no reward, so the
/// result must be rescored before training.
CandidatePool refresh_pool(const CandidatePool& pool, std::span<const Response> fresh);

struct BestOfN {
  Response best;
  std::size_t index = 0;
  std::vector<Response> samples;
  std::vector<double> rewards;
};

/// n temperature samples; keeps the highest raw reward, first index on ties.
BestOfN best_of_n(const Policy& policy, const Query& query, std::size_t n,
                  const RewardModel& rm, const DecodeConfig& sampling, Rng& rng);

}  // namespace lirelab
