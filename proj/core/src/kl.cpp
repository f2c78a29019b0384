// Copyright 2026 The lirelab Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <map>

#include "lirelab/errors.hpp"
#include "lirelab/policy.hpp"

namespace lirelab {

namespace {

void check_pair(const Policy& policy, const Policy& reference) {
  if (!policy.compatible_with(reference)) {
    throw ConfigError("policy and reference must share vocabulary and query classes");
  }
}

}  // namespace

double sequence_kl_exact(const Policy& policy, const Policy& reference,
                         std::span<const Query> queries) {
  check_pair(policy, reference);
  if (queries.empty()) throw DomainError("sequence_kl: no queries");
  const auto support = enumerate_responses(policy.vocab());

  // The divergence depends on the query only through its tag.
  std::map<int, double> per_tag;
  for (const Query& q : queries) {
    if (per_tag.contains(q.tag)) continue;
    double kl = 0.0;
    for (const auto& y : support) {
      const double lp = seq_log_prob(policy, q.tag, y);
      const double lr = seq_log_prob(reference, q.tag, y);
      kl += std::exp(lp) * (lp - lr);
    }
    per_tag[q.tag] = kl;
  }
  double total = 0.0;
  for (const Query& q : queries) total += per_tag.at(q.tag);
  return total / static_cast<double>(queries.size());
}

KlEstimate sequence_kl_monte_carlo(const Policy& policy, const Policy& reference,
                                   std::span<const Query> queries, std::size_t n_samples,
                                   Rng& rng) {
  check_pair(policy, reference);
  if (queries.empty()) throw DomainError("sequence_kl: no queries");
  if (n_samples == 0) throw ConfigError("sequence_kl: n_samples must be positive");

  DecodeConfig sampling;
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t n = 0;
  for (const Query& q : queries) {
    for (std::size_t s = 0; s < n_samples; ++s) {
      const Response y = sample_response(policy, q, sampling, rng);
      const double d = seq_log_prob(policy, q.tag, y.tokens) -
                       seq_log_prob(reference, q.tag, y.tokens);
      sum += d;
      sum_sq += d * d;
      ++n;
    }
  }
  KlEstimate est;
  est.samples = n;
  est.mean = sum / static_cast<double>(n);
  if (n > 1) {
    const double var = (sum_sq - static_cast<double>(n) * est.mean * est.mean) /
                       static_cast<double>(n - 1);
    est.standard_error = std::sqrt(std::max(var, 0.0) / static_cast<double>(n));
  }
  return est;
}

double sequence_kl(const Policy& policy, const Policy& reference, std::span<const Query> queries,
                   std::size_t n_samples, Rng& rng, KlMode mode) {
  const bool exact =
      mode == KlMode::exact ||
      (mode == KlMode::automatic &&
       enumeration_admissible(policy.vocab(), policy.vocab().max_len));
  if (exact) return sequence_kl_exact(policy, reference, queries);
  return sequence_kl_monte_carlo(policy, reference, queries, n_samples, rng).mean;
}

}  // namespace lirelab
