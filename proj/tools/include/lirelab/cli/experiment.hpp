// Copyright 2026 The lirelab Authors
// SPDX-License-Identifier: Apache-2.0

// In-memory experiment pipeline behind the CLI commands: data generation,
// training per method, evaluation, method comparison and the T sweep.

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lirelab/cli/config.hpp"
#include "lirelab/evaluation.hpp"
#include "lirelab/objectives.hpp"
#include "lirelab/training.hpp"

namespace lirelab::cli {

/// Ids first_id, first_id + 1, ...; tags uniform over the query classes.
std::vector<Query> make_queries(std::size_t count, int first_id, int query_classes, Rng& rng);

/// One unscored pool of data.pool_size responses per query. With anchors the
/// pool opens with a human-chosen response (best under RM of anchor_samples
/// draws from the anchor expert) and, when M >= 2, a human-rejected one
/// (worst of anchor_samples draws from the initial policy); the remaining
/// entries are initial-policy samples.
std::vector<CandidatePool> build_pools(const ExperimentConfig& cfg, std::span<const Query> queries,
                                       Rng& rng);

struct Dataset {
  std::vector<CandidatePool> train;
  std::vector<CandidatePool> eval;  // human-chosen entries serve as baselines
};

/// Deterministic in cfg.seed. Eval query ids continue after the train ids.
Dataset generate_dataset(const ExperimentConfig& cfg);

EvalConfig eval_config(const ExperimentConfig& cfg);

/// self_enhance from the initial policy with cfg.plan, `method` swapped in.
SelfEnhanceResult train_policy(const ExperimentConfig& cfg, Method method,
                               std::span<const CandidatePool> train_pools,
                               const CheckpointFn& checkpoint = {});

struct MethodResult {
  std::string method;
  EvalReport report;
  /// Exact (or Monte Carlo) RM reward of the trained policy's sampling
  /// distribution over the eval queries; nan for best_of_n.
  double expected_reward = 0.0;
};

/// Trains `method` ("lire", "pg", "dpo", "sft") on the train pools and
/// evaluates on the eval pools. "best_of_n" trains nothing: each eval query
/// gets the best of eval.best_of_n samples from the initial policy, and kl
/// is reported as nan.
MethodResult run_method(const ExperimentConfig& cfg, std::string_view method,
                        const Dataset& data);

std::vector<MethodResult> compare_methods(const ExperimentConfig& cfg, const Dataset& data);

/// One LIRE run per objective temperature in eval.sweep_temperatures, same
/// data and seeds. mean_reward is the expected RM reward over the eval
/// queries; win_rate is the greedy RM win rate against the baselines.
std::vector<SweepRow> sweep_temperatures(const ExperimentConfig& cfg, const Dataset& data);

/// Frontier of `policy` against the initial policy over the eval baselines.
std::vector<FrontierRow> frontier(const ExperimentConfig& cfg, const Policy& policy,
                                  std::span<const CandidatePool> eval_pools);

}  // namespace lirelab::cli
