// Copyright 2026 The lirelab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "lirelab/policy.hpp"
#include "lirelab/tensor.hpp"

namespace lirelab {

/// A query with its M candidate responses. Rewards may be absent until the
/// pool has been scored.
struct CandidatePool {
  Query query;
  std::vector<Response> responses;
};

/// A pool whose every response carries a raw reward, plus the per-query
/// softmax of those rewards.
struct ScoredPool : CandidatePool {
  std::vector<double> norm_rewards;

  /// Throws DomainError unless M >= 1, rewards are present and norm_rewards
  /// is a distribution over the M responses.
  void validate() const;
  std::vector<double> raw_rewards() const;
};

/// Builds a ScoredPool from responses that already carry raw rewards.
ScoredPool make_scored_pool(CandidatePool pool);

struct ObjectiveConfig {
  double temperature = 1.0;  // T
  double sft_weight = 0.0;   // alpha
  double dpo_beta = 0.1;     // beta

  void validate() const;
};

struct LossReport {
  double value = 0.0;
  ParamTensor grad;
  /// LIRE: the candidate distribution P over the pool (concatenated across
  /// pools for batch reports). Other objectives: the weight applied to each
  /// response's grad-log-prob.
  std::vector<double> per_sample_weights;
};

/// Softmax over raw rewards; invariant under adding a constant to all inputs.
std::vector<double> normalize_rewards(std::span<const double> raw);

/// P_j = exp(lp_j / T) / sum_j' exp(lp_j' / T), with max-subtraction.
std::vector<double> candidate_distribution(std::span<const double> log_probs, double temperature);

/// Listwise loss of one pool, value -sum_j P_j r_j with its exact gradient.
LossReport lire_loss(const Policy& policy, const ScoredPool& pool, const ObjectiveConfig& cfg);
/// Mean over pools.
LossReport lire_loss(const Policy& policy, std::span<const ScoredPool> pools,
                     const ObjectiveConfig& cfg);

/// -(1/T) sum_j P_j (r_j - sum_j' P_j' r_j') grad log pi(y_j | x).
ParamTensor lire_grad(const Policy& policy, const ScoredPool& pool, const ObjectiveConfig& cfg);

/// Pairwise weight pi1^(1/T) pi2^(1/T) / (pi1^(1/T) + pi2^(1/T))^2 * (r1 - r2),
/// evaluated as sigma(a) sigma(-a) (r1 - r2) with a = (log_p1 - log_p2) / T.
double lire2_weight(double log_p1, double log_p2, double r1, double r2, double temperature);

/// Gradient of a two-response pool assembled from lire2_weight.
ParamTensor lire2_grad(const Policy& policy, const ScoredPool& pool, double temperature);

struct RewardedSample {
  Query query;
  Response response;
  double reward = 0.0;  // raw
};

/// REINFORCE-style mean: value -(1/m) sum_i R_i log pi(y_i | x_i).
LossReport pg_loss(const Policy& policy, std::span<const RewardedSample> batch);

/// -log sigma(beta [log pi/pi_ref (y_w) - log pi/pi_ref (y_l)]).
LossReport dpo_loss(const Policy& policy, const Policy* reference, const Query& query,
                    const Response& chosen, const Response& rejected, const ObjectiveConfig& cfg);

struct PreferencePair {
  std::size_t chosen = 0;
  std::size_t rejected = 0;
};

/// (y_w, y_l) for a pool: a human-chosen / human-rejected pair when the pool
/// has source labels, otherwise the highest and lowest raw reward (ties go to
/// the lower index). nullopt when the pool has fewer than two responses.
std::optional<PreferencePair> select_preference_pair(const CandidatePool& pool);

/// Index of the SFT target: the first human-chosen response, else the first
/// maximum of the raw rewards. nullopt when neither exists.
std::optional<std::size_t> select_sft_target(const CandidatePool& pool);

struct LabeledSample {
  Query query;
  Response response;
};

/// Negative mean log-likelihood.
LossReport sft_loss(const Policy& policy, std::span<const LabeledSample> batch);

/// lire_loss + alpha * sft_loss over the same pools.
LossReport combined_loss(const Policy& policy, const ScoredPool& pool,
                         const ObjectiveConfig& cfg);
LossReport combined_loss(const Policy& policy, std::span<const ScoredPool> pools,
                         const ObjectiveConfig& cfg);

}  // namespace lirelab
