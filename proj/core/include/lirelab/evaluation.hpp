// Copyright 2026 The lirelab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "lirelab/objectives.hpp"
#include "lirelab/policy.hpp"
#include "lirelab/rewards.hpp"

namespace lirelab {

struct QueryResponse {
  Query query;
  Response response;
};

/// Percentage of pairs where the first reward beats the second; ties count
/// one half. win_rate(a, b) + win_rate(b, a) == 100 exactly.
double win_rate(std::span<const double> policy_rewards, std::span<const double> baseline_rewards);
double win_rate(std::span<const QueryResponse> policy, std::span<const QueryResponse> baseline,
                const RewardModel& rm);

/// Percentage of queries whose reward dropped from `before` to `after`.
double negative_flip_rate(std::span<const double> before, std::span<const double> after);
double negative_flip_rate(std::span<const QueryResponse> before,
                          std::span<const QueryResponse> after, const RewardModel& rm);

struct EvalConfig {
  DecodeConfig decode{DecodeMode::greedy, 1.0, 0, 0};
  std::size_t kl_samples = 2000;
  KlMode kl_mode = KlMode::automatic;
  std::uint64_t seed = 0;
};

/// One response per query from `policy`.
std::vector<QueryResponse> decode_all(const Policy& policy, std::span<const Query> queries,
                                      const DecodeConfig& decode, Rng& rng);

/// Per pool: the human-chosen response when present, otherwise the greedy
/// decode of `reference`.
std::vector<QueryResponse> baseline_responses(std::span<const CandidatePool> pools,
                                              const Policy& reference);

struct EvalRow {
  int query_id = 0;
  int tag = 0;
  double reward_rm = 0.0;
  double reward_rm_star = 0.0;
  double baseline_rm = 0.0;
  double baseline_rm_star = 0.0;
  double before_rm = 0.0;  // reference policy's response under RM
};

struct EvalReport {
  double mean_reward_rm = 0.0;
  double mean_reward_rm_star = 0.0;
  double win_rate_rm = 0.0;       // vs baselines, percent
  double win_rate_rm_star = 0.0;  // vs baselines, percent
  double win_rate = 0.0;          // average of the two
  double negative_flip_rate = 0.0;
  double kl = 0.0;  // KL(policy || reference)
  std::vector<EvalRow> rows;
};

/// Decodes `policy` and `reference` on every pool's query and scores both
/// against the pool baselines under RM and RM*.
EvalReport evaluate(const Policy& policy, const Policy& reference,
                    std::span<const CandidatePool> eval_pools, const RewardModel& rm,
                    const RewardModel& rm_star, const EvalConfig& cfg);

struct FrontierRow {
  double temperature = 1.0;
  double kl = 0.0;
  double win_rate = 0.0;
  double mean_reward = 0.0;
};

/// For each sampling temperature t: samples from policy at t, KL between the
/// policy and the reference both tempered by t, and RM win rate against
/// `baseline`.
std::vector<FrontierRow> reward_kl_frontier(const Policy& policy, const Policy& reference,
                                            std::span<const QueryResponse> baseline,
                                            const RewardModel& rm,
                                            std::span<const double> temperatures,
                                            const EvalConfig& cfg);

struct SweepRow {
  double temperature = 1.0;
  double mean_reward = 0.0;
  double win_rate = 0.0;
};

struct SweepMetrics {
  double mean_reward = 0.0;
  double win_rate = 0.0;
};

/// Trains and evaluates once per objective temperature T via `run`, which
/// must use the same seeds for every T.
std::vector<SweepRow> temperature_sweep(const std::function<SweepMetrics(double)>& run,
                                        std::span<const double> temperatures);

}  // namespace lirelab
