// Copyright 2026 The lirelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "lirelab/cli/experiment.hpp"

#include <cmath>
#include <limits>

#include "lirelab/errors.hpp"

namespace lirelab::cli {

namespace {

constexpr std::uint64_t kDataStream = 10;
constexpr std::uint64_t kEvalStream = 11;
constexpr std::uint64_t kExpectedRewardStream = 12;
constexpr std::uint64_t kBestOfNStream = 13;

std::vector<Query> queries_of(std::span<const CandidatePool> pools) {
  std::vector<Query> out;
  out.reserve(pools.size());
  for (const auto& p : pools) out.push_back(p.query);
  return out;
}

double mean(std::span<const double> xs) {
  double total = 0.0;
  for (double x : xs) total += x;
  return total / static_cast<double>(xs.size());
}

std::vector<double> scores(std::span<const QueryResponse> rs, const RewardModel& rm) {
  std::vector<double> out;
  out.reserve(rs.size());
  for (const auto& r : rs) out.push_back(rm.score(r.query, r.response));
  return out;
}

double expected_eval_reward(const ExperimentConfig& cfg, const Policy& policy,
                            std::span<const CandidatePool> eval_pools) {
  const auto queries = queries_of(eval_pools);
  Rng rng = make_rng(cfg.seed, kExpectedRewardStream);
  return expected_reward(policy, queries, cfg.reward_model(), cfg.plan.eval_samples, rng);
}

// The evaluate() report for a fixed set of responses that no policy owns.
EvalReport report_for_responses(const ExperimentConfig& cfg, std::span<const QueryResponse> responses,
                                std::span<const CandidatePool> eval_pools) {
  const Policy reference = cfg.initial_policy();
  const auto queries = queries_of(eval_pools);
  const EvalConfig ecfg = eval_config(cfg);
  Rng reference_rng = make_rng(ecfg.seed);
  const auto before = decode_all(reference, queries, ecfg.decode, reference_rng);
  const auto baseline = baseline_responses(eval_pools, reference);

  const auto r_rm = scores(responses, cfg.reward_model());
  const auto r_star = scores(responses, cfg.held_out_reward_model());
  const auto b_rm = scores(baseline, cfg.reward_model());
  const auto b_star = scores(baseline, cfg.held_out_reward_model());
  const auto before_rm = scores(before, cfg.reward_model());

  EvalReport report;
  report.mean_reward_rm = mean(r_rm);
  report.mean_reward_rm_star = mean(r_star);
  report.win_rate_rm = win_rate(r_rm, b_rm);
  report.win_rate_rm_star = win_rate(r_star, b_star);
  report.win_rate = 0.5 * (report.win_rate_rm + report.win_rate_rm_star);
  report.negative_flip_rate = negative_flip_rate(before_rm, r_rm);
  report.kl = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < queries.size(); ++i) {
    report.rows.push_back(
        {queries[i].id, queries[i].tag, r_rm[i], r_star[i], b_rm[i], b_star[i], before_rm[i]});
  }
  return report;
}

}  // namespace

std::vector<Query> make_queries(std::size_t count, int first_id, int query_classes, Rng& rng) {
  std::vector<Query> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const int tag = std::min(query_classes - 1,
                             static_cast<int>(uniform01(rng) * static_cast<double>(query_classes)));
    out.push_back(Query{first_id + static_cast<int>(i), tag, {}});
  }
  return out;
}

std::vector<CandidatePool> build_pools(const ExperimentConfig& cfg, std::span<const Query> queries,
                                       Rng& rng) {
  const Policy init = cfg.initial_policy();
  const Policy expert = cfg.anchor_expert();
  const RewardModel& rm = cfg.reward_model();
  const DecodeConfig sampling{DecodeMode::temperature, 1.0, 0, 0};
  const std::size_t m = cfg.data.pool_size;

  std::vector<CandidatePool> pools;
  pools.reserve(queries.size());
  for (const auto& q : queries) {
    CandidatePool pool{q, {}};
    if (cfg.data.anchors) {
      const auto chosen = best_of_n(expert, q, cfg.data.anchor_samples, rm, sampling, rng);
      pool.responses.push_back(Response{chosen.best.tokens, Source::human_chosen, {}});
      if (m >= 2) {
        std::optional<Response> worst;
        double worst_score = 0.0;
        for (std::size_t k = 0; k < cfg.data.anchor_samples; ++k) {
          auto y = sample_response(init, q, sampling, rng);
          const double s = rm.score(q, y);
          if (!worst || s < worst_score) {
            worst = std::move(y);
            worst_score = s;
          }
        }
        pool.responses.push_back(Response{worst->tokens, Source::human_rejected, {}});
      }
    }
    while (pool.responses.size() < m) {
      auto y = sample_response(init, q, sampling, rng);
      pool.responses.push_back(Response{std::move(y.tokens), Source::model_sample, {}});
    }
    pools.push_back(std::move(pool));
  }
  return pools;
}

Dataset generate_dataset(const ExperimentConfig& cfg) {
  Rng rng = make_rng(cfg.seed, kDataStream);
  Dataset data;
  const auto train_queries = make_queries(cfg.data.train_queries, 0, cfg.query_classes, rng);
  data.train = build_pools(cfg, train_queries, rng);
  const auto eval_queries = make_queries(cfg.data.eval_queries,
                                         static_cast<int>(cfg.data.train_queries),
                                         cfg.query_classes, rng);
  data.eval = build_pools(cfg, eval_queries, rng);
  return data;
}

EvalConfig eval_config(const ExperimentConfig& cfg) {
  EvalConfig e;
  e.decode = DecodeConfig{DecodeMode::greedy, 1.0, 0, 0};
  e.kl_samples = cfg.eval.kl_samples;
  e.kl_mode = cfg.eval.kl_mode;
  e.seed = derive_seed(cfg.seed, kEvalStream);
  return e;
}

SelfEnhanceResult train_policy(const ExperimentConfig& cfg, Method method,
                               std::span<const CandidatePool> train_pools,
                               const CheckpointFn& checkpoint) {
  TrainPlan plan = cfg.plan;
  plan.train.method = method;
  return self_enhance(cfg.initial_policy(), train_pools, cfg.reward_model(), plan, checkpoint);
}

MethodResult run_method(const ExperimentConfig& cfg, std::string_view method,
                        const Dataset& data) {
  MethodResult result;
  result.method = std::string(method);
  if (method == "best_of_n") {
    const Policy init = cfg.initial_policy();
    const DecodeConfig sampling{DecodeMode::temperature, cfg.plan.sampling.sampling_temperature, 0,
                                0};
    Rng rng = make_rng(cfg.seed, kBestOfNStream);
    std::vector<QueryResponse> responses;
    responses.reserve(data.eval.size());
    for (const auto& pool : data.eval) {
      auto pick = best_of_n(init, pool.query, cfg.eval.best_of_n, cfg.reward_model(), sampling, rng);
      responses.push_back({pool.query, std::move(pick.best)});
    }
    result.report = report_for_responses(cfg, responses, data.eval);
    result.expected_reward = std::numeric_limits<double>::quiet_NaN();
    return result;
  }
  const auto trained = train_policy(cfg, parse_method(method), data.train);
  result.report = evaluate(trained.policy, cfg.initial_policy(), data.eval, cfg.reward_model(),
                           cfg.held_out_reward_model(), eval_config(cfg));
  result.expected_reward = expected_eval_reward(cfg, trained.policy, data.eval);
  return result;
}

std::vector<MethodResult> compare_methods(const ExperimentConfig& cfg, const Dataset& data) {
  std::vector<MethodResult> out;
  out.reserve(cfg.compare_methods.size());
  for (const auto& m : cfg.compare_methods) out.push_back(run_method(cfg, m, data));
  return out;
}

std::vector<SweepRow> sweep_temperatures(const ExperimentConfig& cfg, const Dataset& data) {
  const Policy init = cfg.initial_policy();
  const auto baseline = baseline_responses(data.eval, init);
  const auto baseline_rm = scores(baseline, cfg.reward_model());
  const auto queries = queries_of(data.eval);
  const EvalConfig ecfg = eval_config(cfg);

  const auto run = [&](double temperature) {
    ExperimentConfig local = cfg;
    local.plan.train.objective.temperature = temperature;
    const auto trained = train_policy(local, Method::lire, data.train);
    Rng rng = make_rng(ecfg.seed);
    const auto responses = decode_all(trained.policy, queries, ecfg.decode, rng);
    SweepMetrics m;
    m.mean_reward = expected_eval_reward(cfg, trained.policy, data.eval);
    m.win_rate = win_rate(scores(responses, cfg.reward_model()), baseline_rm);
    return m;
  };
  return temperature_sweep(run, cfg.eval.sweep_temperatures);
}

std::vector<FrontierRow> frontier(const ExperimentConfig& cfg, const Policy& policy,
                                  std::span<const CandidatePool> eval_pools) {
  const Policy init = cfg.initial_policy();
  if (!policy.compatible_with(init)) {
    throw ConfigError("policy shape does not match the configured vocab and query classes");
  }
  const auto baseline = baseline_responses(eval_pools, init);
  return reward_kl_frontier(policy, init, baseline, cfg.reward_model(),
                            cfg.eval.frontier_temperatures, eval_config(cfg));
}

}  // namespace lirelab::cli
