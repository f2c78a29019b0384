// Copyright 2026 The lirelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "lirelab/training.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <thread>

#include "lirelab/errors.hpp"

namespace lirelab {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::lire:
      return "lire";
    case Method::pg:
      return "pg";
    case Method::dpo:
      return "dpo";
    case Method::sft:
      return "sft";
  }
  return "lire";
}

Method parse_method(std::string_view text) {
  if (text == "lire") return Method::lire;
  if (text == "pg") return Method::pg;
  if (text == "dpo") return Method::dpo;
  if (text == "sft") return Method::sft;
  throw ConfigError("unknown training method '" + std::string(text) + "'");
}

void TrainConfig::validate() const {
  objective.validate();
  optimizer.validate();
  if (threads < 1) throw ConfigError("threads must be >= 1");
}

void TrainPlan::validate() const {
  if (evolve_steps < 1) throw ConfigError("evolve_steps E must be >= 1");
  if (iterate_steps < 1) throw ConfigError("iterate_steps I must be >= 1");
  if (pool_size < 1) throw ConfigError("pool_size M must be >= 1");
  train.validate();
}

namespace {

// Number of terms the batch mean divides by.
std::size_t batch_count(Method method, std::span<const ScoredPool> pools) {
  switch (method) {
    case Method::pg: {
      std::size_t n = 0;
      for (const auto& p : pools) n += p.responses.size();
      return n;
    }
    case Method::dpo: {
      std::size_t n = 0;
      for (const auto& p : pools) n += select_preference_pair(p).has_value() ? 1 : 0;
      return n;
    }
    case Method::lire:
    case Method::sft:
      return pools.size();
  }
  return pools.size();
}

// Adds scale * (loss, grad) of one pool into `out`.
void accumulate_pool(Method method, const Policy& policy, const Policy* reference,
                     const ScoredPool& pool, const ObjectiveConfig& cfg, double scale,
                     LossReport& out) {
  switch (method) {
    case Method::lire: {
      const auto r = combined_loss(policy, pool, cfg);
      out.value += scale * r.value;
      out.grad.add_scaled(scale, r.grad);
      out.per_sample_weights.insert(out.per_sample_weights.end(), r.per_sample_weights.begin(),
                                    r.per_sample_weights.end());
      return;
    }
    case Method::pg: {
      const auto raw = pool.raw_rewards();
      for (std::size_t j = 0; j < pool.responses.size(); ++j) {
        const double lp = seq_log_prob(policy, pool.query.tag, pool.responses[j].tokens);
        out.value -= scale * raw[j] * lp;
        accumulate_seq_log_prob_grad(policy, pool.query.tag, pool.responses[j].tokens,
                                     -scale * raw[j], out.grad);
        out.per_sample_weights.push_back(-scale * raw[j]);
      }
      return;
    }
    case Method::dpo: {
      const auto pair = select_preference_pair(pool);
      if (!pair) return;
      const auto r = dpo_loss(policy, reference, pool.query, pool.responses[pair->chosen],
                              pool.responses[pair->rejected], cfg);
      out.value += scale * r.value;
      out.grad.add_scaled(scale, r.grad);
      out.per_sample_weights.push_back(scale * r.per_sample_weights[0]);
      out.per_sample_weights.push_back(scale * r.per_sample_weights[1]);
      return;
    }
    case Method::sft: {
      const auto target = select_sft_target(pool);
      if (!target) {
        throw ConfigError("sft: pool for query " + std::to_string(pool.query.id) +
                          " has no chosen response");
      }
      const auto& y = pool.responses[*target];
      out.value -= scale * seq_log_prob(policy, pool.query.tag, y.tokens);
      accumulate_seq_log_prob_grad(policy, pool.query.tag, y.tokens, -scale, out.grad);
      out.per_sample_weights.push_back(-scale);
      return;
    }
  }
}

LossReport empty_report(const Policy& policy) {
  LossReport r;
  r.grad = ParamTensor(policy.query_classes(), policy.vocab().size);
  return r;
}

double pool_reward_under_policy(const Policy& policy, const ScoredPool& pool, double temperature) {
  std::vector<double> lp;
  lp.reserve(pool.responses.size());
  for (const auto& y : pool.responses) lp.push_back(seq_log_prob(policy, pool.query.tag, y.tokens));
  const auto probs = candidate_distribution(lp, temperature);
  const auto raw = pool.raw_rewards();
  double value = 0.0;
  for (std::size_t j = 0; j < raw.size(); ++j) value += probs[j] * raw[j];
  return value;
}

std::vector<ScoredPool> gather(std::span<const ScoredPool> pools,
                               std::span<const std::size_t> order) {
  std::vector<ScoredPool> out;
  out.reserve(order.size());
  for (std::size_t i : order) out.push_back(pools[i]);
  return out;
}

}  // namespace

LossReport batch_loss(Method method, const Policy& policy, const Policy* reference,
                      std::span<const ScoredPool> pools, const ObjectiveConfig& cfg,
                      int threads) {
  cfg.validate();
  if (pools.empty()) throw DomainError("batch_loss: empty batch");
  if (method == Method::dpo && reference == nullptr) {
    throw ConfigError("dpo requires a reference policy");
  }
  for (const auto& p : pools) p.validate();
  const std::size_t count = batch_count(method, pools);
  if (count == 0) throw DomainError("batch_loss: no usable training pairs in batch");
  const double scale = 1.0 / static_cast<double>(count);

  const std::size_t workers =
      std::min(static_cast<std::size_t>(std::max(threads, 1)), pools.size());
  if (workers <= 1) {
    LossReport out = empty_report(policy);
    for (const auto& pool : pools) accumulate_pool(method, policy, reference, pool, cfg, scale, out);
    return out;
  }

  std::vector<LossReport> partial(workers, empty_report(policy));
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool_threads;
    pool_threads.reserve(workers);
    const std::size_t chunk = (pools.size() + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      pool_threads.emplace_back([&, w] {
        try {
          const std::size_t begin = w * chunk;
          const std::size_t end = std::min(pools.size(), begin + chunk);
          for (std::size_t i = begin; i < end; ++i) {
            accumulate_pool(method, policy, reference, pools[i], cfg, scale, partial[w]);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  LossReport out = std::move(partial[0]);
  for (std::size_t w = 1; w < workers; ++w) {
    out.value += partial[w].value;
    out.grad += partial[w].grad;
    out.per_sample_weights.insert(out.per_sample_weights.end(),
                                  partial[w].per_sample_weights.begin(),
                                  partial[w].per_sample_weights.end());
  }
  return out;
}

EpochMetrics train_epoch(Policy& policy, std::span<const ScoredPool> pools,
                         const TrainConfig& cfg, OptimizerState& opt, Rng& rng,
                         const Policy* reference) {
  cfg.validate();
  if (pools.empty()) throw DomainError("train_epoch: no pools");

  std::vector<std::size_t> order(pools.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Fisher-Yates with our own uniform draw keeps the order independent of the
  // standard library's distribution implementation.
  for (std::size_t i = order.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(i));
    std::swap(order[i - 1], order[std::min(j, i - 1)]);
  }

  const std::size_t batch = cfg.batch_size == 0 ? pools.size() : cfg.batch_size;
  EpochMetrics metrics;
  double loss_sum = 0.0;
  double reward_sum = 0.0;
  for (std::size_t begin = 0; begin < order.size(); begin += batch) {
    const std::size_t end = std::min(order.size(), begin + batch);
    const auto indices = std::span<const std::size_t>(order).subspan(begin, end - begin);
    const auto batch_pools = gather(pools, indices);
    for (const auto& p : batch_pools) {
      reward_sum += pool_reward_under_policy(policy, p, cfg.objective.temperature);
    }
    const auto report =
        batch_loss(cfg.method, policy, reference, batch_pools, cfg.objective, cfg.threads);
    loss_sum += report.value * static_cast<double>(batch_pools.size());
    apply_update(policy, report.grad, opt);
    ++metrics.steps;
  }
  metrics.mean_loss = loss_sum / static_cast<double>(pools.size());
  metrics.mean_pool_reward = reward_sum / static_cast<double>(pools.size());
  return metrics;
}

Rng evolve_sampling_rng(std::uint64_t seed, int evolve) {
  return make_rng(seed, 0x65766f00ULL + static_cast<std::uint64_t>(evolve));
}

Rng shuffle_rng(std::uint64_t seed) { return make_rng(seed, 0x7368756600ULL); }

std::vector<CandidatePool> sample_pools(const Policy& policy, std::span<const Query> queries,
                                        std::size_t pool_size, const DecodeConfig& sampling,
                                        Rng& rng) {
  std::vector<CandidatePool> pools;
  pools.reserve(queries.size());
  for (const auto& q : queries) {
    CandidatePool pool{q, {}};
    pool.responses.reserve(pool_size);
    for (std::size_t j = 0; j < pool_size; ++j) {
      pool.responses.push_back(sample_response(policy, q, sampling, rng));
    }
    pools.push_back(std::move(pool));
  }
  return pools;
}

CandidatePool refresh_pool(const CandidatePool& pool, std::span<const Response> fresh) {
  const auto model_entries = static_cast<std::size_t>(
      std::count_if(pool.responses.begin(), pool.responses.end(),
                    [](const Response& r) { return r.source == Source::model_sample; }));
  if (fresh.size() != model_entries) {
    throw DomainError("refresh_pool: " + std::to_string(fresh.size()) +
                      " fresh samples for " + std::to_string(model_entries) +
                      " model-sample entries");
  }
  CandidatePool out = pool;
  std::size_t next = 0;
  for (auto& r : out.responses) {
    if (r.source != Source::model_sample) continue;
    r = fresh[next++];
    r.source = Source::model_sample;
    r.reward.reset();
  }
  return out;
}

namespace {

struct PoolSource {
  // Returns the pools for Evolve step `evolve`, drawn from `current`.
  std::function<std::vector<CandidatePool>(int evolve, const Policy& current)> next;
};

SelfEnhanceResult run_self_enhance(const Policy& initial, std::span<const Query> queries,
                                   const RewardModel& rm, const TrainPlan& plan,
                                   const PoolSource& source, const CheckpointFn& checkpoint) {
  plan.validate();
  SelfEnhanceResult result{initial, {}};
  const Policy reference = initial;
  Rng shuffler = shuffle_rng(plan.train.seed);
  Rng evaluator = make_rng(plan.train.seed, 0x6576616cULL);
  OptimizerState opt(plan.train.optimizer);

  for (int e = 1; e <= plan.evolve_steps; ++e) {
    const auto pools = score_pools(rm, source.next(e, result.policy));
    opt.reset();
    for (int i = 1; i <= plan.iterate_steps; ++i) {
      const auto metrics = train_epoch(result.policy, pools, plan.train, opt, shuffler, &reference);
      TraceRow row;
      row.evolve = e;
      row.iterate = i;
      row.mean_loss = metrics.mean_loss;
      row.mean_pool_reward = metrics.mean_pool_reward;
      row.expected_reward =
          expected_reward(result.policy, queries, rm, plan.eval_samples, evaluator);
      result.trace.push_back(row);
      if (checkpoint) checkpoint(e, i, result.policy);
    }
  }
  return result;
}

}  // namespace

SelfEnhanceResult self_enhance(const Policy& initial, std::span<const Query> queries,
                               const RewardModel& rm, const TrainPlan& plan,
                               const CheckpointFn& checkpoint) {
  if (queries.empty()) throw DomainError("self_enhance: no queries");
  PoolSource source{[&](int e, const Policy& current) {
    Rng rng = evolve_sampling_rng(plan.train.seed, e);
    return sample_pools(current, queries, plan.pool_size, plan.sampling, rng);
  }};
  return run_self_enhance(initial, queries, rm, plan, source, checkpoint);
}

SelfEnhanceResult self_enhance(const Policy& initial, std::span<const CandidatePool> pools,
                               const RewardModel& rm, const TrainPlan& plan,
                               const CheckpointFn& checkpoint) {
  if (pools.empty()) throw DomainError("self_enhance: no pools");
  std::vector<Query> queries;
  queries.reserve(pools.size());
  for (const auto& p : pools) queries.push_back(p.query);

  PoolSource source{[&](int e, const Policy& current) {
    std::vector<CandidatePool> out(pools.begin(), pools.end());
    if (e == 1) return out;
    Rng rng = evolve_sampling_rng(plan.train.seed, e);
    for (auto& pool : out) {
      const auto n = static_cast<std::size_t>(
          std::count_if(pool.responses.begin(), pool.responses.end(),
                        [](const Response& r) { return r.source == Source::model_sample; }));
      std::vector<Response> fresh;
      fresh.reserve(n);
      for (std::size_t j = 0; j < n; ++j) {
        fresh.push_back(sample_response(current, pool.query, plan.sampling, rng));
      }
      pool = refresh_pool(pool, fresh);
    }
    return out;
  }};
  return run_self_enhance(initial, queries, rm, plan, source, checkpoint);
}

BestOfN best_of_n(const Policy& policy, const Query& query, std::size_t n, const RewardModel& rm,
                  const DecodeConfig& sampling, Rng& rng) {
  if (n == 0) throw DomainError("best_of_n: n must be >= 1");
  BestOfN out;
  out.samples.reserve(n);
  out.rewards.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.samples.push_back(sample_response(policy, query, sampling, rng));
    out.rewards.push_back(rm.score(query, out.samples.back()));
    if (out.rewards[k] > out.rewards[out.index]) out.index = k;
  }
  out.best = out.samples[out.index];
  out.best.reward = out.rewards[out.index];
  return out;
}

}  // namespace lirelab
