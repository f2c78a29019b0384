// Copyright 2026 The lirelab Authors
// SPDX-License-Identifier: Apache-2.0

// Line-delimited JSON pools, one query per line:
//   {"query_id": 3, "query_tag": 1, "query_tokens": [],
//    "candidates": [{"tokens": [0, 2, 3], "source": "human-chosen", "raw_reward": null}, ...]}

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lirelab/objectives.hpp"
#include "lirelab/policy.hpp"

namespace lirelab::cli {

std::string format_pool_line(const CandidatePool& pool);

/// Throws ParseError carrying `line_number` on malformed input. Tokens are
/// validated against `vocab` when given.
CandidatePool parse_pool_line(const std::string& line, std::size_t line_number,
                              const std::optional<Vocab>& vocab = std::nullopt);

void write_pools(std::ostream& out, std::span<const CandidatePool> pools);
/// Blank lines are skipped. Every pool must have the same candidate count.
std::vector<CandidatePool> read_pools(std::istream& in,
                                      const std::optional<Vocab>& vocab = std::nullopt);

void save_pools(const std::filesystem::path& path, std::span<const CandidatePool> pools);
std::vector<CandidatePool> load_pools(const std::filesystem::path& path,
                                      const std::optional<Vocab>& vocab = std::nullopt);

}  // namespace lirelab::cli
