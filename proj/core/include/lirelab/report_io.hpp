// Copyright 2026 The lirelab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <initializer_list>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lirelab/evaluation.hpp"
#include "lirelab/training.hpp"

namespace lirelab {

/// CSV with a leading `# schema: <name> v<version>` comment and a header row.
/// Doubles are written with 17 significant digits.
class CsvWriter {
 public:
  using Cell = std::variant<std::string, long long, double>;

  CsvWriter(std::ostream& out, std::string_view schema, int version,
            std::vector<std::string> columns);

  void row(std::initializer_list<Cell> cells);
  void row(const std::vector<Cell>& cells);

 private:
  std::ostream& out_;
  std::size_t columns_;
};

inline constexpr int kReportSchemaVersion = 1;

void write_eval_summary_csv(std::ostream& out, const EvalReport& report);
void write_eval_rows_csv(std::ostream& out, const EvalReport& report);
void write_eval_json(std::ostream& out, const EvalReport& report);

void write_frontier_csv(std::ostream& out, std::span<const FrontierRow> rows);
void write_frontier_json(std::ostream& out, std::span<const FrontierRow> rows);

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);
void write_sweep_json(std::ostream& out, std::span<const SweepRow> rows);

void write_trace_csv(std::ostream& out, std::span<const TraceRow> rows);

}  // namespace lirelab
