// Copyright 2026 The lirelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "lirelab/cli/pool_file.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "lirelab/errors.hpp"

namespace lirelab::cli {

using nlohmann::ordered_json;

std::string format_pool_line(const CandidatePool& pool) {
  ordered_json line;
  line["query_id"] = pool.query.id;
  line["query_tag"] = pool.query.tag;
  line["query_tokens"] = pool.query.tokens;
  auto candidates = ordered_json::array();
  for (const auto& r : pool.responses) {
    ordered_json c;
    c["tokens"] = r.tokens;
    c["source"] = std::string(to_string(r.source));
    if (r.reward && std::isfinite(*r.reward)) {
      c["raw_reward"] = *r.reward;
    } else if (r.reward) {
      throw DomainError("query " + std::to_string(pool.query.id) +
                        ": non-finite reward cannot be written");
    } else {
      c["raw_reward"] = nullptr;
    }
    candidates.push_back(std::move(c));
  }
  line["candidates"] = std::move(candidates);
  return line.dump();
}

CandidatePool parse_pool_line(const std::string& line, std::size_t line_number,
                              const std::optional<Vocab>& vocab) {
  const auto fail = [&](const std::string& what) -> ParseError {
    return ParseError("pool line " + std::to_string(line_number) + ": " + what, line_number);
  };
  ordered_json doc;
  try {
    doc = ordered_json::parse(line);
  } catch (const ordered_json::parse_error& e) {
    throw fail(std::string("malformed JSON (") + e.what() + ")");
  }
  if (!doc.is_object()) throw fail("expected a JSON object");

  CandidatePool pool;
  try {
    pool.query.id = doc.at("query_id").get<int>();
    pool.query.tag = doc.at("query_tag").get<int>();
    pool.query.tokens = doc.value("query_tokens", TokenSequence{});
    for (const auto& c : doc.at("candidates")) {
      Response r;
      r.tokens = c.at("tokens").get<TokenSequence>();
      r.source = parse_source(c.value("source", std::string("model-sample")));
      if (c.contains("raw_reward") && !c.at("raw_reward").is_null()) {
        r.reward = c.at("raw_reward").get<double>();
      }
      pool.responses.push_back(std::move(r));
    }
  } catch (const ordered_json::exception& e) {
    throw fail(std::string("bad field (") + e.what() + ")");
  } catch (const ParseError& e) {
    throw fail(e.what());
  }
  if (pool.query.tag < 0) throw fail("query_tag must be >= 0");
  if (vocab) {
    for (std::size_t j = 0; j < pool.responses.size(); ++j) {
      try {
        validate_response(*vocab, pool.responses[j].tokens);
      } catch (const InvalidTokenError& e) {
        throw fail("candidate " + std::to_string(j) + ": " + e.what());
      }
    }
  }
  return pool;
}

void write_pools(std::ostream& out, std::span<const CandidatePool> pools) {
  for (const auto& pool : pools) out << format_pool_line(pool) << '\n';
}

std::vector<CandidatePool> read_pools(std::istream& in, const std::optional<Vocab>& vocab) {
  std::vector<CandidatePool> pools;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    pools.push_back(parse_pool_line(line, number, vocab));
    if (pools.back().responses.size() != pools.front().responses.size()) {
      throw ParseError("pool line " + std::to_string(number) + ": " +
                           std::to_string(pools.back().responses.size()) +
                           " candidates, earlier lines have " +
                           std::to_string(pools.front().responses.size()),
                       number);
    }
  }
  return pools;
}

void save_pools(const std::filesystem::path& path, std::span<const CandidatePool> pools) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write pool file " + path.string());
  write_pools(out, pools);
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<CandidatePool> load_pools(const std::filesystem::path& path,
                                      const std::optional<Vocab>& vocab) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open pool file " + path.string());
  try {
    return read_pools(in, vocab);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line());
  }
}

}  // namespace lirelab::cli
