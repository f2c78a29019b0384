// Copyright 2026 The lirelab Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include "lirelab/errors.hpp"
#include "lirelab/policy.hpp"

namespace lirelab {

namespace {

// V^max_len, saturating just above the guard.
std::size_t guard_measure(const Vocab& vocab, int max_len) {
  std::size_t total = 1;
  for (int k = 0; k < max_len; ++k) {
    total *= static_cast<std::size_t>(vocab.size);
    if (total > kEnumerationGuard) return kEnumerationGuard + 1;
  }
  return total;
}

void expand(const Vocab& vocab, int max_len, TokenSequence& prefix,
            std::vector<TokenSequence>& out) {
  if (static_cast<int>(prefix.size()) == max_len) {
    out.push_back(prefix);
    return;
  }
  for (Token t = 0; t < vocab.eos(); ++t) {
    prefix.push_back(t);
    expand(vocab, max_len, prefix, out);
    prefix.pop_back();
  }
  prefix.push_back(vocab.eos());
  out.push_back(prefix);
  prefix.pop_back();
}

}  // namespace

bool enumeration_admissible(const Vocab& vocab, int max_len) {
  return guard_measure(vocab, max_len) <= kEnumerationGuard;
}

std::size_t enumeration_size(const Vocab& vocab, int max_len) {
  std::size_t total = 0;
  std::size_t term = 1;
  for (int k = 0; k <= max_len; ++k) {
    total += term;
    term *= static_cast<std::size_t>(vocab.size - 1);
  }
  return total;
}

std::vector<TokenSequence> enumerate_responses(const Vocab& vocab, int max_len) {
  vocab.validate();
  if (max_len < 0 || max_len > vocab.max_len) {
    throw ConfigError("enumeration max_len must lie in [0, vocab.max_len]");
  }
  if (!enumeration_admissible(vocab, max_len)) {
    throw EnumerationTooLarge("enumeration of V=" + std::to_string(vocab.size) +
                              ", max_len=" + std::to_string(max_len) +
                              " exceeds the 10^6 guard");
  }
  std::vector<TokenSequence> out;
  out.reserve(enumeration_size(vocab, max_len));
  if (max_len == 0) {
    out.emplace_back();
    return out;
  }
  TokenSequence prefix;
  expand(vocab, max_len, prefix, out);
  // DFS emits children before the EOS leaf; ids already order them, but the
  // contract is lexicographic so make it explicit.
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<TokenSequence> enumerate_responses(const Vocab& vocab) {
  return enumerate_responses(vocab, vocab.max_len);
}

double terminated_mass(const Policy& policy, int tag, int max_len) {
  double mass = 0.0;
  for (const auto& y : enumerate_responses(policy.vocab(), max_len)) {
    if (!y.empty() && y.back() == policy.vocab().eos()) {
      mass += std::exp(seq_log_prob(policy, tag, y));
    }
  }
  return mass;
}

}  // namespace lirelab
