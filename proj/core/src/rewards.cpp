// Copyright 2026 The lirelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "lirelab/rewards.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "lirelab/errors.hpp"

namespace lirelab {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::size_t count_occurrences(std::span<const Token> haystack, std::span<const Token> needle) {
  if (needle.empty() || needle.size() > haystack.size()) return 0;
  std::size_t count = 0;
  for (std::size_t i = 0; i + needle.size() <= haystack.size(); ++i) {
    if (std::equal(needle.begin(), needle.end(), haystack.begin() + static_cast<long>(i))) {
      ++count;
    }
  }
  return count;
}

// Rewards here depend on the query only through its tag; group by tag so
// exhaustive evaluation runs once per query class.
std::map<int, std::size_t> tag_counts(std::span<const Query> queries) {
  std::map<int, std::size_t> counts;
  for (const auto& q : queries) ++counts[q.tag];
  return counts;
}

}  // namespace

std::string_view to_string(RewardKind kind) {
  switch (kind) {
    case RewardKind::pattern_count:
      return "pattern-count";
    case RewardKind::expert_likelihood:
      return "expert-likelihood";
    case RewardKind::predicate:
      return "predicate";
  }
  return "predicate";
}

std::string_view to_string(PredicateKind kind) {
  return kind == PredicateKind::even_count ? "even-count" : "contains";
}

PredicateKind parse_predicate_kind(std::string_view text) {
  if (text == "even-count") return PredicateKind::even_count;
  if (text == "contains") return PredicateKind::contains;
  throw ConfigError("unknown predicate '" + std::string(text) + "'");
}

RewardModel::RewardModel(Spec spec) : spec_(std::move(spec)) {
  std::visit(Overloaded{
                 [](const PatternCountReward& p) {
                   if (p.targets.empty()) throw ConfigError("pattern-count reward needs a target");
                   for (const auto& t : p.targets) {
                     if (t.empty()) throw ConfigError("pattern-count target must be nonempty");
                     if (std::find(t.begin(), t.end(), p.eos) != t.end()) {
                       throw ConfigError("pattern-count target must not contain EOS");
                     }
                   }
                   if (!std::isfinite(p.length_penalty)) {
                     throw ConfigError("length penalty must be finite");
                   }
                 },
                 [](const ExpertLikelihoodReward& e) {
                   if (!e.expert) throw ConfigError("expert-likelihood reward needs an expert");
                 },
                 [](const PredicateReward&) {},
             },
             spec_);
}

RewardKind RewardModel::kind() const noexcept { return static_cast<RewardKind>(spec_.index()); }

double RewardModel::score(const Query& query, std::span<const Token> tokens) const {
  return std::visit(
      Overloaded{
          [&](const PatternCountReward& p) {
            const auto& target = p.targets[static_cast<std::size_t>(query.tag) % p.targets.size()];
            auto content = tokens;
            if (!content.empty() && content.back() == p.eos) content = content.first(content.size() - 1);
            return static_cast<double>(count_occurrences(content, target)) -
                   p.length_penalty * static_cast<double>(content.size());
          },
          [&](const ExpertLikelihoodReward& e) {
            return seq_log_prob(*e.expert, query.tag, tokens);
          },
          [&](const PredicateReward& pr) {
            const auto n = std::count(tokens.begin(), tokens.end(), pr.token);
            const bool holds = pr.kind == PredicateKind::even_count ? n % 2 == 0 : n > 0;
            return holds ? 1.0 : 0.0;
          },
      },
      spec_);
}

RewardModel RewardModel::perturbed(double scale, std::uint64_t seed) const {
  return std::visit(
      Overloaded{
          [&](const PatternCountReward& p) {
            PatternCountReward out = p;
            out.length_penalty += scale;
            return RewardModel(out);
          },
          [&](const ExpertLikelihoodReward& e) {
            Policy noisy = *e.expert;
            Rng rng = make_rng(seed, 0x726d2a);
            std::normal_distribution<double> normal(0.0, 1.0);
            for (double& v : noisy.params().flat()) v += scale * normal(rng);
            return RewardModel(ExpertLikelihoodReward{std::make_shared<const Policy>(noisy)});
          },
          [&](const PredicateReward& pr) { return RewardModel(pr); },
      },
      spec_);
}

double score(const RewardModel& rm, const Query& query, const Response& response) {
  return rm.score(query, response);
}

ScoredPool score_pool(const RewardModel& rm, const CandidatePool& pool) {
  if (pool.responses.empty()) {
    throw DomainError("score_pool: pool for query " + std::to_string(pool.query.id) +
                      " is empty");
  }
  CandidatePool copy{pool.query, pool.responses};
  for (auto& r : copy.responses) r.reward = rm.score(copy.query, r);
  return make_scored_pool(std::move(copy));
}

std::vector<ScoredPool> score_pools(const RewardModel& rm, std::span<const CandidatePool> pools) {
  std::vector<ScoredPool> out;
  out.reserve(pools.size());
  for (const auto& pool : pools) out.push_back(score_pool(rm, pool));
  return out;
}

double expected_reward_exact(const Policy& policy, std::span<const Query> queries,
                             const RewardModel& rm) {
  if (queries.empty()) throw DomainError("expected_reward: no queries");
  const auto support = enumerate_responses(policy.vocab());
  double total = 0.0;
  for (const auto& [tag, count] : tag_counts(queries)) {
    Query representative;
    representative.tag = tag;
    double value = 0.0;
    for (const auto& y : support) {
      value += std::exp(seq_log_prob(policy, tag, y)) * rm.score(representative, y);
    }
    total += static_cast<double>(count) * value;
  }
  return total / static_cast<double>(queries.size());
}

double expected_reward_monte_carlo(const Policy& policy, std::span<const Query> queries,
                                   const RewardModel& rm, std::size_t samples, Rng& rng) {
  if (queries.empty()) throw DomainError("expected_reward: no queries");
  if (samples == 0) throw ConfigError("expected_reward: samples must be positive");
  DecodeConfig sampling;
  double total = 0.0;
  for (const auto& q : queries) {
    double value = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
      value += rm.score(q, sample_response(policy, q, sampling, rng));
    }
    total += value / static_cast<double>(samples);
  }
  return total / static_cast<double>(queries.size());
}

double expected_reward(const Policy& policy, std::span<const Query> queries,
                       const RewardModel& rm, std::size_t samples, Rng& rng) {
  if (enumeration_admissible(policy.vocab(), policy.vocab().max_len)) {
    return expected_reward_exact(policy, queries, rm);
  }
  return expected_reward_monte_carlo(policy, queries, rm, samples, rng);
}

std::optional<TokenSequence> enumerated_optimum(const RewardModel& rm, const Query& query,
                                                const Vocab& vocab) {
  std::optional<TokenSequence> best;
  double best_score = -std::numeric_limits<double>::infinity();
  bool unique = false;
  for (auto& y : enumerate_responses(vocab)) {
    const double s = rm.score(query, y);
    if (s > best_score) {
      best_score = s;
      best = std::move(y);
      unique = true;
    } else if (s == best_score) {
      unique = false;
    }
  }
  if (!unique) return std::nullopt;
  return best;
}

}  // namespace lirelab
