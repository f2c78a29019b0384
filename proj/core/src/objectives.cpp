// Copyright 2026 The lirelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "lirelab/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lirelab/errors.hpp"

namespace lirelab {

void ScoredPool::validate() const {
  if (responses.empty()) throw DomainError("pool for query " + std::to_string(query.id) +
                                           " has no responses");
  if (norm_rewards.size() != responses.size()) {
    throw DomainError("pool for query " + std::to_string(query.id) + " is not scored");
  }
  double total = 0.0;
  for (double r : norm_rewards) {
    if (!(r >= 0.0 && r <= 1.0)) throw DomainError("normalized reward outside [0, 1]");
    total += r;
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("normalized rewards do not sum to 1");
}

std::vector<double> ScoredPool::raw_rewards() const {
  std::vector<double> raw;
  raw.reserve(responses.size());
  for (const auto& r : responses) {
    if (!r.reward) throw DomainError("response without a raw reward");
    raw.push_back(*r.reward);
  }
  return raw;
}

ScoredPool make_scored_pool(CandidatePool pool) {
  ScoredPool scored;
  static_cast<CandidatePool&>(scored) = std::move(pool);
  scored.norm_rewards = normalize_rewards(scored.raw_rewards());
  return scored;
}

void ObjectiveConfig::validate() const {
  if (!(temperature > 0.0)) throw ConfigError("temperature T must be positive");
  if (!(sft_weight >= 0.0)) throw ConfigError("sft_weight alpha must be nonnegative");
  if (!(dpo_beta > 0.0)) throw ConfigError("dpo_beta must be positive");
}

namespace {

std::vector<double> stable_softmax(std::span<const double> x) {
  const double m = *std::max_element(x.begin(), x.end());
  std::vector<double> out(x.size());
  double z = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = std::exp(x[i] - m);
    z += out[i];
  }
  for (double& v : out) v /= z;
  return out;
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// -log sigma(z)
double softplus_neg(double z) {
  if (z > 0.0) return std::log1p(std::exp(-z));
  return -z + std::log1p(std::exp(z));
}

std::vector<double> pool_log_probs(const Policy& policy, const CandidatePool& pool) {
  std::vector<double> lp;
  lp.reserve(pool.responses.size());
  for (const auto& r : pool.responses) lp.push_back(seq_log_prob(policy, pool.query.tag, r.tokens));
  return lp;
}

ParamTensor zero_grad(const Policy& policy) {
  return ParamTensor(policy.query_classes(), policy.vocab().size);
}

// Accumulates the listwise gradient of one pool into `grad` with an extra
// factor `scale`. Token-identical responses are merged first and each merged
// weight is sum_{j in g} P_j sum_{j' not in g} P_j' (r_j - r_j'), which equals
// the demeaned-reward weight of the group; terms inside a group cancel
// analytically and are left out, so the structural zeros come out exact.
void accumulate_lire_grad(const Policy& policy, const ScoredPool& pool,
                          std::span<const double> probs, double temperature, double scale,
                          ParamTensor& grad) {
  const auto& ys = pool.responses;
  const auto& r = pool.norm_rewards;
  const std::size_t m = ys.size();

  std::vector<std::size_t> group(m);
  for (std::size_t j = 0; j < m; ++j) {
    group[j] = j;
    for (std::size_t k = 0; k < j; ++k) {
      if (ys[k].tokens == ys[j].tokens) {
        group[j] = group[k];
        break;
      }
    }
  }

  std::vector<double> weight(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    double dev = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      if (group[k] == group[j]) continue;
      dev += probs[k] * (r[j] - r[k]);
    }
    weight[group[j]] += probs[j] * dev;
  }
  for (std::size_t g = 0; g < m; ++g) {
    if (weight[g] == 0.0) continue;
    accumulate_seq_log_prob_grad(policy, pool.query.tag, ys[g].tokens,
                                 -scale * weight[g] / temperature, grad);
  }
}

}  // namespace

std::vector<double> normalize_rewards(std::span<const double> raw) {
  if (raw.empty()) throw DomainError("normalize_rewards: empty reward list");
  for (double v : raw) {
    if (!std::isfinite(v)) throw DomainError("normalize_rewards: non-finite reward");
  }
  return stable_softmax(raw);
}

std::vector<double> candidate_distribution(std::span<const double> log_probs,
                                           double temperature) {
  if (!(temperature > 0.0)) throw ConfigError("candidate_distribution: T must be positive");
  if (log_probs.empty()) throw DomainError("candidate_distribution: empty pool");
  std::vector<double> scaled(log_probs.begin(), log_probs.end());
  for (double& v : scaled) v /= temperature;
  return stable_softmax(scaled);
}

LossReport lire_loss(const Policy& policy, const ScoredPool& pool, const ObjectiveConfig& cfg) {
  cfg.validate();
  pool.validate();
  const auto lp = pool_log_probs(policy, pool);
  LossReport report;
  report.per_sample_weights = candidate_distribution(lp, cfg.temperature);
  report.value = 0.0;
  for (std::size_t j = 0; j < lp.size(); ++j) {
    report.value -= report.per_sample_weights[j] * pool.norm_rewards[j];
  }
  report.grad = zero_grad(policy);
  accumulate_lire_grad(policy, pool, report.per_sample_weights, cfg.temperature, 1.0,
                       report.grad);
  return report;
}

LossReport lire_loss(const Policy& policy, std::span<const ScoredPool> pools,
                     const ObjectiveConfig& cfg) {
  if (pools.empty()) throw DomainError("lire_loss: empty batch");
  cfg.validate();
  const double inv = 1.0 / static_cast<double>(pools.size());
  LossReport report;
  report.grad = zero_grad(policy);
  for (const auto& pool : pools) {
    pool.validate();
    const auto lp = pool_log_probs(policy, pool);
    const auto probs = candidate_distribution(lp, cfg.temperature);
    double value = 0.0;
    for (std::size_t j = 0; j < lp.size(); ++j) value -= probs[j] * pool.norm_rewards[j];
    report.value += inv * value;
    accumulate_lire_grad(policy, pool, probs, cfg.temperature, inv, report.grad);
    report.per_sample_weights.insert(report.per_sample_weights.end(), probs.begin(),
                                     probs.end());
  }
  return report;
}

ParamTensor lire_grad(const Policy& policy, const ScoredPool& pool, const ObjectiveConfig& cfg) {
  return lire_loss(policy, pool, cfg).grad;
}

double lire2_weight(double log_p1, double log_p2, double r1, double r2, double temperature) {
  if (!(temperature > 0.0)) throw ConfigError("lire2_weight: T must be positive");
  const double a = std::abs(log_p1 - log_p2) / temperature;
  const double e = std::exp(-a);
  const double pq = e / ((1.0 + e) * (1.0 + e));
  return pq * (r1 - r2);
}

ParamTensor lire2_grad(const Policy& policy, const ScoredPool& pool, double temperature) {
  pool.validate();
  if (pool.responses.size() != 2) throw DomainError("lire2_grad: pool must have exactly 2 responses");
  const auto lp = pool_log_probs(policy, pool);
  const double w =
      lire2_weight(lp[0], lp[1], pool.norm_rewards[0], pool.norm_rewards[1], temperature);
  ParamTensor grad = zero_grad(policy);
  accumulate_seq_log_prob_grad(policy, pool.query.tag, pool.responses[0].tokens,
                               -w / temperature, grad);
  accumulate_seq_log_prob_grad(policy, pool.query.tag, pool.responses[1].tokens,
                               w / temperature, grad);
  return grad;
}

LossReport pg_loss(const Policy& policy, std::span<const RewardedSample> batch) {
  if (batch.empty()) throw DomainError("pg_loss: empty batch");
  const double inv = 1.0 / static_cast<double>(batch.size());
  LossReport report;
  report.grad = zero_grad(policy);
  for (const auto& s : batch) {
    if (!std::isfinite(s.reward)) throw DomainError("pg_loss: non-finite reward");
    const double lp = seq_log_prob(policy, s.query.tag, s.response.tokens);
    report.value -= inv * lp * s.reward;
    accumulate_seq_log_prob_grad(policy, s.query.tag, s.response.tokens, -inv * s.reward,
                                 report.grad);
    report.per_sample_weights.push_back(-inv * s.reward);
  }
  return report;
}

LossReport dpo_loss(const Policy& policy, const Policy* reference, const Query& query,
                    const Response& chosen, const Response& rejected,
                    const ObjectiveConfig& cfg) {
  cfg.validate();
  if (reference == nullptr) throw ConfigError("dpo_loss: a reference policy is required");
  if (!policy.compatible_with(*reference)) {
    throw ConfigError("dpo_loss: reference policy shape mismatch");
  }
  const double margin_w = seq_log_prob(policy, query.tag, chosen.tokens) -
                          seq_log_prob(*reference, query.tag, chosen.tokens);
  const double margin_l = seq_log_prob(policy, query.tag, rejected.tokens) -
                          seq_log_prob(*reference, query.tag, rejected.tokens);
  const double z = cfg.dpo_beta * (margin_w - margin_l);
  // sigma(r_l - r_w) with implicit rewards r = beta * log(pi / pi_ref)
  const double p_tilde = sigmoid(-z);

  LossReport report;
  report.value = softplus_neg(z);
  report.grad = zero_grad(policy);
  const double w = cfg.dpo_beta * p_tilde;
  accumulate_seq_log_prob_grad(policy, query.tag, chosen.tokens, -w, report.grad);
  accumulate_seq_log_prob_grad(policy, query.tag, rejected.tokens, w, report.grad);
  report.per_sample_weights = {w, -w};
  return report;
}

std::optional<PreferencePair> select_preference_pair(const CandidatePool& pool) {
  const auto& ys = pool.responses;
  if (ys.size() < 2) return std::nullopt;

  std::optional<std::size_t> chosen;
  std::optional<std::size_t> rejected;
  for (std::size_t j = 0; j < ys.size(); ++j) {
    if (!chosen && ys[j].source == Source::human_chosen) chosen = j;
    if (!rejected && ys[j].source == Source::human_rejected) rejected = j;
  }
  if (chosen && rejected) return PreferencePair{*chosen, *rejected};

  const bool scored =
      std::all_of(ys.begin(), ys.end(), [](const Response& r) { return r.reward.has_value(); });
  if (!scored) return std::nullopt;
  if (!chosen) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < ys.size(); ++j) {
      if (*ys[j].reward > *ys[best].reward) best = j;
    }
    chosen = best;
  }
  if (!rejected) {
    std::optional<std::size_t> worst;
    for (std::size_t j = 0; j < ys.size(); ++j) {
      if (j == *chosen) continue;
      if (!worst || *ys[j].reward < *ys[*worst].reward) worst = j;
    }
    rejected = worst;
  }
  return PreferencePair{*chosen, *rejected};
}

std::optional<std::size_t> select_sft_target(const CandidatePool& pool) {
  const auto& ys = pool.responses;
  for (std::size_t j = 0; j < ys.size(); ++j) {
    if (ys[j].source == Source::human_chosen) return j;
  }
  std::optional<std::size_t> best;
  for (std::size_t j = 0; j < ys.size(); ++j) {
    if (!ys[j].reward) return std::nullopt;
    if (!best || *ys[j].reward > *ys[*best].reward) best = j;
  }
  return best;
}

LossReport sft_loss(const Policy& policy, std::span<const LabeledSample> batch) {
  if (batch.empty()) throw DomainError("sft_loss: empty batch");
  const double inv = 1.0 / static_cast<double>(batch.size());
  LossReport report;
  report.grad = zero_grad(policy);
  for (const auto& s : batch) {
    report.value -= inv * seq_log_prob(policy, s.query.tag, s.response.tokens);
    accumulate_seq_log_prob_grad(policy, s.query.tag, s.response.tokens, -inv, report.grad);
    report.per_sample_weights.push_back(-inv);
  }
  return report;
}

namespace {

std::vector<LabeledSample> sft_targets(std::span<const ScoredPool> pools) {
  std::vector<LabeledSample> batch;
  batch.reserve(pools.size());
  for (const auto& pool : pools) {
    const auto target = select_sft_target(pool);
    if (!target) {
      throw ConfigError("sft_weight > 0 but pool for query " + std::to_string(pool.query.id) +
                        " has no chosen response");
    }
    batch.push_back({pool.query, pool.responses[*target]});
  }
  return batch;
}

}  // namespace

LossReport combined_loss(const Policy& policy, std::span<const ScoredPool> pools,
                         const ObjectiveConfig& cfg) {
  LossReport report = lire_loss(policy, pools, cfg);
  if (cfg.sft_weight == 0.0) return report;
  const auto sft = sft_loss(policy, sft_targets(pools));
  report.value += cfg.sft_weight * sft.value;
  report.grad.add_scaled(cfg.sft_weight, sft.grad);
  return report;
}

LossReport combined_loss(const Policy& policy, const ScoredPool& pool,
                         const ObjectiveConfig& cfg) {
  return combined_loss(policy, std::span<const ScoredPool>(&pool, 1), cfg);
}

}  // namespace lirelab
