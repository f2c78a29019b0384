// Copyright 2026 The lirelab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lirelab/tensor.hpp"

namespace lirelab {

using Token = int;
using TokenSequence = std::vector<Token>;
using Rng = std::mt19937_64;

/// Independent, reproducible generator for (seed, stream).
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

/// Uniform double in [0, 1) from the top 53 bits of one draw.
double uniform01(Rng& rng);

/// Vocabulary of `size` ids; the largest id is the reserved EOS token.
struct Vocab {
  int size = 2;
  int max_len = 1;

  Token eos() const noexcept { return size - 1; }
  void validate() const;
  friend bool operator==(const Vocab&, const Vocab&) = default;
};

struct Query {
  int id = 0;
  int tag = 0;
  TokenSequence tokens;  // display only; conditioning goes through `tag`
};

enum class Source { human_chosen, human_rejected, model_sample };

std::string_view to_string(Source source);
Source parse_source(std::string_view text);

struct Response {
  TokenSequence tokens;
  Source source = Source::model_sample;
  std::optional<double> reward;  // raw, unbounded
};

/// Query-conditioned tabular bigram policy.
///
/// Logit `params().at(tag, prev, next)` scores `next` after `prev` for query
/// class `tag`. The EOS row doubles as the BOS context at position 0, which is
/// unambiguous because nothing is generated after EOS.
class Policy {
 public:
  /// All-zero logits, i.e. the uniform policy.
  Policy(Vocab vocab, int query_classes);
  Policy(Vocab vocab, ParamTensor params);

  /// Logits drawn i.i.d. from N(0, scale^2).
  static Policy random(Vocab vocab, int query_classes, double scale, std::uint64_t seed);

  const Vocab& vocab() const noexcept { return vocab_; }
  int query_classes() const noexcept { return params_.query_classes(); }
  const ParamTensor& params() const noexcept { return params_; }
  ParamTensor& params() noexcept { return params_; }

  /// Same policy with every logit divided by `temperature`.
  Policy tempered(double temperature) const;

  /// Softmax of the row for (tag, prev) written into `out` (size V).
  void next_token_probs(int tag, Token prev, std::span<double> out) const;
  std::vector<double> next_token_probs(int tag, Token prev) const;

  bool compatible_with(const Policy& other) const noexcept {
    return vocab_ == other.vocab_ && params_.same_shape(other.params_);
  }

  friend bool operator==(const Policy&, const Policy&) = default;

 private:
  Vocab vocab_;
  ParamTensor params_;
};

/// Throws InvalidTokenError unless every id is < V, EOS appears only last,
/// and the length is within max_len.
void validate_response(const Vocab& vocab, std::span<const Token> tokens);

/// log pi(y | x) = sum_k log P(y_k | tag, y_{k-1}).
double seq_log_prob(const Policy& policy, int tag, std::span<const Token> tokens);
double seq_log_prob(const Policy& policy, const Query& query, const Response& response);

/// grad += weight * d/dparams log pi(y | x). Visited rows receive
/// weight * (onehot(next) - softmax(row)).
void accumulate_seq_log_prob_grad(const Policy& policy, int tag, std::span<const Token> tokens,
                                  double weight, ParamTensor& grad);

ParamTensor seq_log_prob_grad(const Policy& policy, const Query& query,
                              const Response& response);

enum class DecodeMode { greedy, temperature };

struct DecodeConfig {
  DecodeMode mode = DecodeMode::temperature;
  double sampling_temperature = 1.0;
  std::uint64_t seed = 0;
  int max_len = 0;  // 0 means the vocabulary's max_len

  void validate(const Vocab& vocab) const;
};

/// Autoregressive generation from the BOS context. Stops after emitting EOS
/// (which is kept as the final token) or after max_len tokens.
Response sample_response(const Policy& policy, const Query& query, const DecodeConfig& cfg,
                         Rng& rng);
/// Same, with a generator seeded from cfg.seed.
Response sample_response(const Policy& policy, const Query& query, const DecodeConfig& cfg);

/// Upper bound on the number of sequences enumerate_responses will produce.
inline constexpr std::size_t kEnumerationGuard = 1'000'000;

/// Complete support of the sampler, in lexicographic order: every content
/// sequence shorter than max_len followed by EOS, plus every content sequence
/// of exactly max_len tokens (truncated, no EOS). Probabilities under any
/// policy sum to 1. Count = sum_{k=0..max_len} (V-1)^k.
std::vector<TokenSequence> enumerate_responses(const Vocab& vocab, int max_len);
std::vector<TokenSequence> enumerate_responses(const Vocab& vocab);

/// Number of sequences enumerate_responses would return, without allocating.
std::size_t enumeration_size(const Vocab& vocab, int max_len);
bool enumeration_admissible(const Vocab& vocab, int max_len);

/// Probability mass of EOS-terminated sequences of at most max_len tokens
/// (EOS included). Nondecreasing in max_len and bounded by 1.
double terminated_mass(const Policy& policy, int tag, int max_len);

/// Mean over queries of KL(policy(.|x) || reference(.|x)) by exhaustive
/// enumeration of the response space.
double sequence_kl_exact(const Policy& policy, const Policy& reference,
                         std::span<const Query> queries);

struct KlEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t samples = 0;
};

/// Monte Carlo estimate of E_x E_{y~policy}[log policy(y|x) - log reference(y|x)]
/// with n_samples draws per query.
KlEstimate sequence_kl_monte_carlo(const Policy& policy, const Policy& reference,
                                   std::span<const Query> queries, std::size_t n_samples,
                                   Rng& rng);

enum class KlMode { exact, monte_carlo, automatic };

/// Exact when requested or when `automatic` and the enumeration guard admits.
double sequence_kl(const Policy& policy, const Policy& reference, std::span<const Query> queries,
                   std::size_t n_samples, Rng& rng, KlMode mode = KlMode::automatic);

/// JSON document: {"format", "version", "V", "Q", "L_max", "params": [...]},
/// params row-major at 17 significant digits.
void write_policy(std::ostream& out, const Policy& policy);
Policy read_policy(std::istream& in);
void save_policy(const std::string& path, const Policy& policy);
Policy load_policy(const std::string& path);

/// `%.17g`-style text; reads back as the identical double.
std::string format_double(double value);

}  // namespace lirelab
