// Copyright 2026 The lirelab Authors
// SPDX-License-Identifier: Apache-2.0

#include <charconv>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "lirelab/errors.hpp"
#include "lirelab/policy.hpp"

namespace lirelab {

namespace {
constexpr const char* kPolicyFormat = "lirelab-policy";
constexpr int kPolicyVersion = 1;
}  // namespace

std::string format_double(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_policy(std::ostream& out, const Policy& policy) {
  const auto& vocab = policy.vocab();
  out << "{\"format\": \"" << kPolicyFormat << "\", \"version\": " << kPolicyVersion
      << ", \"V\": " << vocab.size << ", \"Q\": " << policy.query_classes()
      << ", \"L_max\": " << vocab.max_len << ",\n \"params\": [";
  const auto flat = policy.params().flat();
  const std::size_t row = static_cast<std::size_t>(vocab.size);
  for (std::size_t i = 0; i < flat.size(); ++i) {
    if (i > 0) out << (i % row == 0 ? ",\n  " : ", ");
    out << format_double(flat[i]);
  }
  out << "]}\n";
}

Policy read_policy(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("policy file: ") + e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != kPolicyFormat) {
      throw ParseError("policy file: unexpected format tag");
    }
    if (doc.at("version").get<int>() != kPolicyVersion) {
      throw ParseError("policy file: unsupported version");
    }
    Vocab vocab{doc.at("V").get<int>(), doc.at("L_max").get<int>()};
    vocab.validate();
    const int q = doc.at("Q").get<int>();
    ParamTensor params(q, vocab.size);
    const auto& values = doc.at("params");
    if (!values.is_array() || values.size() != params.size()) {
      throw ParseError("policy file: expected " + std::to_string(params.size()) +
                       " parameters");
    }
    auto flat = params.flat();
    for (std::size_t i = 0; i < flat.size(); ++i) flat[i] = values[i].get<double>();
    return Policy(vocab, std::move(params));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("policy file: ") + e.what());
  }
}

void save_policy(const std::string& path, const Policy& policy) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_policy(out, policy);
  if (!out) throw IoError("failed writing '" + path + "'");
}

Policy load_policy(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return read_policy(in);
}

}  // namespace lirelab
