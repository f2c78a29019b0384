// Copyright 2026 The lirelab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "lirelab/objectives.hpp"
#include "lirelab/policy.hpp"

namespace lirelab {

/// count(target n-gram for the query's tag) - length_penalty * content length.
/// Query tag q uses targets[q % targets.size()]; occurrences may overlap. The
/// content length excludes a trailing `eos`.
struct PatternCountReward {
  std::vector<TokenSequence> targets;
  double length_penalty = 0.0;
  Token eos = 0;
};

/// log-likelihood of the response under a hidden expert policy.
struct ExpertLikelihoodReward {
  std::shared_ptr<const Policy> expert;
};

enum class PredicateKind {
  even_count,  // the number of `token` occurrences is even
  contains,    // `token` occurs at least once
};

/// 1.0 when the predicate holds, else 0.0.
struct PredicateReward {
  PredicateKind kind = PredicateKind::even_count;
  Token token = 0;
};

enum class RewardKind { pattern_count, expert_likelihood, predicate };

std::string_view to_string(RewardKind kind);
std::string_view to_string(PredicateKind kind);
PredicateKind parse_predicate_kind(std::string_view text);

/// Deterministic programmatic reward: same (query, response), same score.
class RewardModel {
 public:
  using Spec = std::variant<PatternCountReward, ExpertLikelihoodReward, PredicateReward>;

  explicit RewardModel(Spec spec);

  RewardKind kind() const noexcept;
  const Spec& spec() const noexcept { return spec_; }

  double score(const Query& query, std::span<const Token> tokens) const;
  double score(const Query& query, const Response& response) const {
    return score(query, response.tokens);
  }

  /// Held-out variant for dual-evaluator reporting: the length penalty moves
  /// by `scale` (pattern-count), the expert logits get N(0, scale^2) noise
  /// (expert-likelihood); predicates are copied unchanged.
  RewardModel perturbed(double scale, std::uint64_t seed) const;

 private:
  Spec spec_;
};

double score(const RewardModel& rm, const Query& query, const Response& response);

/// Fills every raw reward and the per-query softmax. Rescoring a scored pool
/// overwrites its rewards with identical values.
ScoredPool score_pool(const RewardModel& rm, const CandidatePool& pool);
std::vector<ScoredPool> score_pools(const RewardModel& rm, std::span<const CandidatePool> pools);

/// Mean over queries of E_{y ~ policy(.|x)} rm(x, y), by enumeration.
double expected_reward_exact(const Policy& policy, std::span<const Query> queries,
                             const RewardModel& rm);

/// Monte Carlo version with `samples` draws per query.
double expected_reward_monte_carlo(const Policy& policy, std::span<const Query> queries,
                                   const RewardModel& rm, std::size_t samples, Rng& rng);

/// Exact when the enumeration guard admits, otherwise Monte Carlo.
double expected_reward(const Policy& policy, std::span<const Query> queries,
                       const RewardModel& rm, std::size_t samples, Rng& rng);

/// Highest-scoring sequence in the full response space for `query`, or
/// nullopt when the maximum is attained more than once.
std::optional<TokenSequence> enumerated_optimum(const RewardModel& rm, const Query& query,
                                                const Vocab& vocab);

}  // namespace lirelab
