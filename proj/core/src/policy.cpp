// Copyright 2026 The lirelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "lirelab/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lirelab/errors.hpp"

namespace lirelab {

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

void Vocab::validate() const {
  if (size < 2) throw ConfigError("vocab size must be >= 2 (one id is reserved for EOS)");
  if (max_len < 1) throw ConfigError("max_len must be >= 1");
}

std::string_view to_string(Source source) {
  switch (source) {
    case Source::human_chosen:
      return "human-chosen";
    case Source::human_rejected:
      return "human-rejected";
    case Source::model_sample:
      return "model-sample";
  }
  return "model-sample";
}

Source parse_source(std::string_view text) {
  if (text == "human-chosen") return Source::human_chosen;
  if (text == "human-rejected") return Source::human_rejected;
  if (text == "model-sample") return Source::model_sample;
  throw ParseError("unknown response source '" + std::string(text) + "'");
}

Policy::Policy(Vocab vocab, int query_classes)
    : vocab_(vocab), params_((vocab.validate(), query_classes), vocab.size) {}

Policy::Policy(Vocab vocab, ParamTensor params) : vocab_(vocab), params_(std::move(params)) {
  vocab_.validate();
  if (params_.vocab_size() != vocab_.size) {
    throw ConfigError("policy parameters do not match the vocabulary size");
  }
  if (!params_.all_finite()) throw ConfigError("policy parameters must be finite");
}

Policy Policy::random(Vocab vocab, int query_classes, double scale, std::uint64_t seed) {
  Policy policy(vocab, query_classes);
  Rng rng = make_rng(seed, 0x706f6c);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double& v : policy.params_.flat()) v = scale * normal(rng);
  return policy;
}

Policy Policy::tempered(double temperature) const {
  if (!(temperature > 0.0)) throw ConfigError("temperature must be positive");
  Policy out = *this;
  out.params_ *= 1.0 / temperature;
  return out;
}

namespace {

void softmax_row(std::span<const double> logits, std::span<double> out) {
  const double m = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - m);
    z += out[i];
  }
  for (double& v : out) v /= z;
}

double log_softmax_entry(std::span<const double> logits, Token t) {
  const double m = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  for (double v : logits) z += std::exp(v - m);
  return logits[static_cast<std::size_t>(t)] - m - std::log(z);
}

void check_tag(const Policy& policy, int tag) {
  if (tag < 0 || tag >= policy.query_classes()) {
    throw ConfigError("query tag " + std::to_string(tag) + " outside [0, " +
                      std::to_string(policy.query_classes()) + ")");
  }
}

}  // namespace

void Policy::next_token_probs(int tag, Token prev, std::span<double> out) const {
  softmax_row(params_.row(tag, prev), out);
}

std::vector<double> Policy::next_token_probs(int tag, Token prev) const {
  std::vector<double> out(static_cast<std::size_t>(vocab_.size));
  next_token_probs(tag, prev, out);
  return out;
}

void validate_response(const Vocab& vocab, std::span<const Token> tokens) {
  if (tokens.size() > static_cast<std::size_t>(vocab.max_len)) {
    throw InvalidTokenError("response of length " + std::to_string(tokens.size()) +
                            " exceeds max_len " + std::to_string(vocab.max_len));
  }
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    const Token t = tokens[k];
    if (t < 0 || t >= vocab.size) {
      throw InvalidTokenError("token id " + std::to_string(t) + " outside vocabulary of size " +
                              std::to_string(vocab.size));
    }
    if (t == vocab.eos() && k + 1 != tokens.size()) {
      throw InvalidTokenError("EOS may only appear as the final token");
    }
  }
}

double seq_log_prob(const Policy& policy, int tag, std::span<const Token> tokens) {
  check_tag(policy, tag);
  validate_response(policy.vocab(), tokens);
  double total = 0.0;
  Token prev = policy.vocab().eos();
  for (Token t : tokens) {
    total += log_softmax_entry(policy.params().row(tag, prev), t);
    prev = t;
  }
  return total;
}

double seq_log_prob(const Policy& policy, const Query& query, const Response& response) {
  return seq_log_prob(policy, query.tag, response.tokens);
}

void accumulate_seq_log_prob_grad(const Policy& policy, int tag, std::span<const Token> tokens,
                                  double weight, ParamTensor& grad) {
  check_tag(policy, tag);
  validate_response(policy.vocab(), tokens);
  if (!grad.same_shape(policy.params())) throw ConfigError("gradient shape mismatch");
  if (weight == 0.0) return;
  std::vector<double> probs(static_cast<std::size_t>(policy.vocab().size));
  Token prev = policy.vocab().eos();
  for (Token t : tokens) {
    policy.next_token_probs(tag, prev, probs);
    auto row = grad.row(tag, prev);
    for (std::size_t i = 0; i < row.size(); ++i) row[i] -= weight * probs[i];
    row[static_cast<std::size_t>(t)] += weight;
    prev = t;
  }
}

ParamTensor seq_log_prob_grad(const Policy& policy, const Query& query,
                              const Response& response) {
  ParamTensor grad(policy.query_classes(), policy.vocab().size);
  accumulate_seq_log_prob_grad(policy, query.tag, response.tokens, 1.0, grad);
  return grad;
}

void DecodeConfig::validate(const Vocab& vocab) const {
  if (!(sampling_temperature > 0.0)) throw ConfigError("sampling_temperature must be positive");
  if (max_len < 0 || max_len > vocab.max_len) {
    throw ConfigError("decode max_len must lie in [0, vocab.max_len]");
  }
}

Response sample_response(const Policy& policy, const Query& query, const DecodeConfig& cfg,
                         Rng& rng) {
  cfg.validate(policy.vocab());
  check_tag(policy, query.tag);
  const int limit = cfg.max_len == 0 ? policy.vocab().max_len : cfg.max_len;
  const Token eos = policy.vocab().eos();
  const std::size_t v = static_cast<std::size_t>(policy.vocab().size);

  Response response;
  response.source = Source::model_sample;
  std::vector<double> probs(v);
  Token prev = eos;
  for (int k = 0; k < limit; ++k) {
    auto logits = policy.params().row(query.tag, prev);
    Token next = 0;
    if (cfg.mode == DecodeMode::greedy) {
      // max_element returns the first maximum: lowest id wins ties.
      next = static_cast<Token>(std::max_element(logits.begin(), logits.end()) - logits.begin());
    } else {
      std::vector<double> scaled(logits.begin(), logits.end());
      for (double& s : scaled) s /= cfg.sampling_temperature;
      softmax_row(scaled, probs);
      const double u = uniform01(rng);
      double cumulative = 0.0;
      next = static_cast<Token>(v - 1);
      for (std::size_t i = 0; i < v; ++i) {
        cumulative += probs[i];
        if (u < cumulative) {
          next = static_cast<Token>(i);
          break;
        }
      }
    }
    response.tokens.push_back(next);
    if (next == eos) break;
    prev = next;
  }
  return response;
}

Response sample_response(const Policy& policy, const Query& query, const DecodeConfig& cfg) {
  Rng rng = make_rng(cfg.seed);
  return sample_response(policy, query, cfg, rng);
}

}  // namespace lirelab
