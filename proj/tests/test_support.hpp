// Copyright 2026 The lirelab Authors
// SPDX-License-Identifier: Apache-2.0

// Random instance generators shared by the unit and acceptance suites.

#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "lirelab/objectives.hpp"
#include "lirelab/policy.hpp"

namespace lirelab::testing {

inline int uniform_int(Rng& rng, int lo, int hi) {
  return lo + static_cast<int>(uniform01(rng) * static_cast<double>(hi - lo + 1));
}

inline double uniform_real(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

/// A valid response: random content, EOS-terminated unless it hits max_len.
inline Response random_response(const Vocab& vocab, Rng& rng, int min_len = 0) {
  const int len = uniform_int(rng, min_len, vocab.max_len);
  Response r;
  for (int k = 0; k < len; ++k) r.tokens.push_back(uniform_int(rng, 0, vocab.eos() - 1));
  if (len < vocab.max_len && uniform01(rng) < 0.8) r.tokens.push_back(vocab.eos());
  return r;
}

struct Instance {
  Policy policy;
  Query query;
};

/// V in [2, 5], L in [1, 6], Q in [1, 3], logits ~ N(0, scale^2).
inline Instance random_instance(Rng& rng, double scale = 1.0) {
  Vocab vocab{uniform_int(rng, 2, 5), uniform_int(rng, 1, 6)};
  const int q = uniform_int(rng, 1, 3);
  Policy policy = Policy::random(vocab, q, scale, rng());
  Query query{uniform_int(rng, 0, 1000), uniform_int(rng, 0, q - 1), {}};
  return {std::move(policy), std::move(query)};
}

/// Pool of m random responses with raw rewards spread over [-2, 2].
inline ScoredPool random_pool(const Vocab& vocab, const Query& query, std::size_t m, Rng& rng) {
  CandidatePool pool{query, {}};
  for (std::size_t j = 0; j < m; ++j) {
    Response r = random_response(vocab, rng);
    r.reward = uniform_real(rng, -2.0, 2.0);
    pool.responses.push_back(std::move(r));
  }
  return make_scored_pool(std::move(pool));
}

/// True when the pool holds at least two token-distinct responses. Otherwise
/// every pool gradient is identically zero and a relative error against finite
/// differences measures only roundoff.
inline bool has_distinct_responses(const CandidatePool& pool) {
  for (const auto& r : pool.responses) {
    if (r.tokens != pool.responses.front().tokens) return true;
  }
  return false;
}

inline ScoredPool random_distinct_pool(const Vocab& vocab, const Query& query, std::size_t m,
                                       Rng& rng) {
  for (;;) {
    ScoredPool pool = random_pool(vocab, query, m, rng);
    if (has_distinct_responses(pool)) return pool;
  }
}

}  // namespace lirelab::testing
