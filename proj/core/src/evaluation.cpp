// Copyright 2026 The lirelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "lirelab/evaluation.hpp"

#include <string>

#include "lirelab/errors.hpp"

namespace lirelab {

namespace {

void check_paired(std::span<const QueryResponse> a, std::span<const QueryResponse> b) {
  if (a.size() != b.size()) {
    throw DomainError("responses are not paired by query (" + std::to_string(a.size()) +
                      " vs " + std::to_string(b.size()) + ")");
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].query.id != b[i].query.id) {
      throw DomainError("unpaired query at position " + std::to_string(i) + ": id " +
                        std::to_string(a[i].query.id) + " vs " +
                        std::to_string(b[i].query.id));
    }
  }
}

std::vector<double> scores(std::span<const QueryResponse> items, const RewardModel& rm) {
  std::vector<double> out;
  out.reserve(items.size());
  for (const auto& it : items) out.push_back(rm.score(it.query, it.response));
  return out;
}

double mean(std::span<const double> xs) {
  double total = 0.0;
  for (double x : xs) total += x;
  return xs.empty() ? 0.0 : total / static_cast<double>(xs.size());
}

}  // namespace

double win_rate(std::span<const double> policy_rewards, std::span<const double> baseline_rewards) {
  if (policy_rewards.size() != baseline_rewards.size()) {
    throw DomainError("win_rate: reward lists are not paired");
  }
  if (policy_rewards.empty()) throw DomainError("win_rate: no queries");
  // Count in half-units so the two directions sum to exactly 2n.
  std::size_t half_wins = 0;
  for (std::size_t i = 0; i < policy_rewards.size(); ++i) {
    if (policy_rewards[i] > baseline_rewards[i]) {
      half_wins += 2;
    } else if (policy_rewards[i] == baseline_rewards[i]) {
      half_wins += 1;
    }
  }
  return 50.0 * static_cast<double>(half_wins) / static_cast<double>(policy_rewards.size());
}

double win_rate(std::span<const QueryResponse> policy, std::span<const QueryResponse> baseline,
                const RewardModel& rm) {
  check_paired(policy, baseline);
  return win_rate(scores(policy, rm), scores(baseline, rm));
}

double negative_flip_rate(std::span<const double> before, std::span<const double> after) {
  if (before.size() != after.size()) throw DomainError("negative_flip_rate: not paired");
  if (before.empty()) throw DomainError("negative_flip_rate: no queries");
  std::size_t flips = 0;
  for (std::size_t i = 0; i < before.size(); ++i) flips += after[i] < before[i] ? 1 : 0;
  return 100.0 * static_cast<double>(flips) / static_cast<double>(before.size());
}

double negative_flip_rate(std::span<const QueryResponse> before,
                          std::span<const QueryResponse> after, const RewardModel& rm) {
  check_paired(before, after);
  return negative_flip_rate(scores(before, rm), scores(after, rm));
}

std::vector<QueryResponse> decode_all(const Policy& policy, std::span<const Query> queries,
                                      const DecodeConfig& decode, Rng& rng) {
  std::vector<QueryResponse> out;
  out.reserve(queries.size());
  for (const auto& q : queries) out.push_back({q, sample_response(policy, q, decode, rng)});
  return out;
}

std::vector<QueryResponse> baseline_responses(std::span<const CandidatePool> pools,
                                              const Policy& reference) {
  const DecodeConfig greedy{DecodeMode::greedy, 1.0, 0, 0};
  std::vector<QueryResponse> out;
  out.reserve(pools.size());
  for (const auto& pool : pools) {
    const Response* chosen = nullptr;
    for (const auto& r : pool.responses) {
      if (r.source == Source::human_chosen) {
        chosen = &r;
        break;
      }
    }
    if (chosen != nullptr) {
      out.push_back({pool.query, *chosen});
    } else {
      Rng unused = make_rng(0);
      out.push_back({pool.query, sample_response(reference, pool.query, greedy, unused)});
    }
  }
  return out;
}

EvalReport evaluate(const Policy& policy, const Policy& reference,
                    std::span<const CandidatePool> eval_pools, const RewardModel& rm,
                    const RewardModel& rm_star, const EvalConfig& cfg) {
  if (eval_pools.empty()) throw DomainError("evaluate: no evaluation queries");
  std::vector<Query> queries;
  queries.reserve(eval_pools.size());
  for (const auto& p : eval_pools) queries.push_back(p.query);

  Rng decode_rng = make_rng(cfg.seed, 0x6465636fULL);
  Rng reference_rng = make_rng(cfg.seed, 0x6465636fULL);
  const auto responses = decode_all(policy, queries, cfg.decode, decode_rng);
  const auto before = decode_all(reference, queries, cfg.decode, reference_rng);
  const auto baseline = baseline_responses(eval_pools, reference);

  const auto r_rm = scores(responses, rm);
  const auto r_star = scores(responses, rm_star);
  const auto b_rm = scores(baseline, rm);
  const auto b_star = scores(baseline, rm_star);
  const auto before_rm = scores(before, rm);

  EvalReport report;
  report.mean_reward_rm = mean(r_rm);
  report.mean_reward_rm_star = mean(r_star);
  report.win_rate_rm = win_rate(r_rm, b_rm);
  report.win_rate_rm_star = win_rate(r_star, b_star);
  report.win_rate = 0.5 * (report.win_rate_rm + report.win_rate_rm_star);
  report.negative_flip_rate = negative_flip_rate(before_rm, r_rm);
  Rng kl_rng = make_rng(cfg.seed, 0x6b6cULL);
  report.kl = sequence_kl(policy, reference, queries, cfg.kl_samples, kl_rng, cfg.kl_mode);

  report.rows.reserve(queries.size());
  for (std::size_t i = 0; i < queries.size(); ++i) {
    report.rows.push_back(
        {queries[i].id, queries[i].tag, r_rm[i], r_star[i], b_rm[i], b_star[i], before_rm[i]});
  }
  return report;
}

std::vector<FrontierRow> reward_kl_frontier(const Policy& policy, const Policy& reference,
                                            std::span<const QueryResponse> baseline,
                                            const RewardModel& rm,
                                            std::span<const double> temperatures,
                                            const EvalConfig& cfg) {
  if (baseline.empty()) throw DomainError("reward_kl_frontier: no baseline responses");
  std::vector<Query> queries;
  queries.reserve(baseline.size());
  for (const auto& b : baseline) queries.push_back(b.query);
  const auto baseline_rewards = scores(baseline, rm);

  std::vector<FrontierRow> rows;
  rows.reserve(temperatures.size());
  for (std::size_t k = 0; k < temperatures.size(); ++k) {
    const double t = temperatures[k];
    if (!(t > 0.0)) throw ConfigError("frontier temperatures must be positive");
    DecodeConfig sampling{DecodeMode::temperature, t, cfg.seed, 0};
    Rng rng = make_rng(cfg.seed, 0x66726f00ULL + k);
    const auto samples = decode_all(policy, queries, sampling, rng);
    const auto rewards = scores(samples, rm);
    Rng kl_rng = make_rng(cfg.seed, 0x6b6c00ULL + k);
    FrontierRow row;
    row.temperature = t;
    row.kl = sequence_kl(policy.tempered(t), reference.tempered(t), queries, cfg.kl_samples,
                         kl_rng, cfg.kl_mode);
    row.win_rate = win_rate(rewards, baseline_rewards);
    row.mean_reward = mean(rewards);
    rows.push_back(row);
  }
  return rows;
}

std::vector<SweepRow> temperature_sweep(const std::function<SweepMetrics(double)>& run,
                                        std::span<const double> temperatures) {
  std::vector<SweepRow> rows;
  rows.reserve(temperatures.size());
  for (double t : temperatures) {
    if (!(t > 0.0)) throw ConfigError("sweep temperatures must be positive");
    const auto m = run(t);
    rows.push_back({t, m.mean_reward, m.win_rate});
  }
  return rows;
}

}  // namespace lirelab
