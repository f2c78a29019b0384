// Copyright 2026 The lirelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "lirelab/report_io.hpp"

#include <cmath>
#include <ostream>

#include <json.hpp>

#include "lirelab/errors.hpp"

namespace lirelab {

namespace {

std::string render(const CsvWriter::Cell& cell) {
  if (const auto* s = std::get_if<std::string>(&cell)) return *s;
  if (const auto* i = std::get_if<long long>(&cell)) return std::to_string(*i);
  return format_double(std::get<double>(cell));
}

// JSON has no spelling for inf or nan.
nlohmann::ordered_json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace

CsvWriter::CsvWriter(std::ostream& out, std::string_view schema, int version,
                     std::vector<std::string> columns)
    : out_(out), columns_(columns.size()) {
  out_ << "# schema: " << schema << " v" << version << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << '\n';
}

void CsvWriter::row(std::initializer_list<Cell> cells) {
  row(std::vector<Cell>(cells));
}

void CsvWriter::row(const std::vector<Cell>& cells) {
  if (cells.size() != columns_) throw ConfigError("CsvWriter: row width does not match header");
  for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << render(cells[i]);
  out_ << '\n';
}

void write_eval_summary_csv(std::ostream& out, const EvalReport& r) {
  CsvWriter csv(out, "lirelab.eval_summary", kReportSchemaVersion,
                {"mean_reward_rm", "mean_reward_rm_star", "win_rate_rm", "win_rate_rm_star",
                 "win_rate_avg", "negative_flip_rate", "kl"});
  csv.row({r.mean_reward_rm, r.mean_reward_rm_star, r.win_rate_rm, r.win_rate_rm_star,
           r.win_rate, r.negative_flip_rate, r.kl});
}

void write_eval_rows_csv(std::ostream& out, const EvalReport& r) {
  CsvWriter csv(out, "lirelab.eval_rows", kReportSchemaVersion,
                {"query_id", "tag", "reward_rm", "reward_rm_star", "baseline_rm",
                 "baseline_rm_star", "before_rm"});
  for (const auto& row : r.rows) {
    csv.row({static_cast<long long>(row.query_id), static_cast<long long>(row.tag), row.reward_rm,
             row.reward_rm_star, row.baseline_rm, row.baseline_rm_star, row.before_rm});
  }
}

void write_eval_json(std::ostream& out, const EvalReport& r) {
  nlohmann::ordered_json doc;
  doc["schema"] = "lirelab.eval_report";
  doc["version"] = kReportSchemaVersion;
  doc["mean_reward_rm"] = number(r.mean_reward_rm);
  doc["mean_reward_rm_star"] = number(r.mean_reward_rm_star);
  doc["win_rate_rm"] = number(r.win_rate_rm);
  doc["win_rate_rm_star"] = number(r.win_rate_rm_star);
  doc["win_rate_avg"] = number(r.win_rate);
  doc["negative_flip_rate"] = number(r.negative_flip_rate);
  doc["kl"] = number(r.kl);
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json j;
    j["query_id"] = row.query_id;
    j["tag"] = row.tag;
    j["reward_rm"] = number(row.reward_rm);
    j["reward_rm_star"] = number(row.reward_rm_star);
    j["baseline_rm"] = number(row.baseline_rm);
    j["baseline_rm_star"] = number(row.baseline_rm_star);
    j["before_rm"] = number(row.before_rm);
    rows.push_back(std::move(j));
  }
  doc["per_query"] = std::move(rows);
  out << doc.dump(2) << '\n';
}

void write_frontier_csv(std::ostream& out, std::span<const FrontierRow> rows) {
  CsvWriter csv(out, "lirelab.frontier", kReportSchemaVersion,
                {"temperature", "kl", "win_rate", "mean_reward"});
  for (const auto& r : rows) csv.row({r.temperature, r.kl, r.win_rate, r.mean_reward});
}

void write_frontier_json(std::ostream& out, std::span<const FrontierRow> rows) {
  nlohmann::ordered_json doc;
  doc["schema"] = "lirelab.frontier";
  doc["version"] = kReportSchemaVersion;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    j["temperature"] = number(r.temperature);
    j["kl"] = number(r.kl);
    j["win_rate"] = number(r.win_rate);
    j["mean_reward"] = number(r.mean_reward);
    arr.push_back(std::move(j));
  }
  doc["rows"] = std::move(arr);
  out << doc.dump(2) << '\n';
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  CsvWriter csv(out, "lirelab.temperature_sweep", kReportSchemaVersion,
                {"T", "mean_reward", "win_rate"});
  for (const auto& r : rows) csv.row({r.temperature, r.mean_reward, r.win_rate});
}

void write_sweep_json(std::ostream& out, std::span<const SweepRow> rows) {
  nlohmann::ordered_json doc;
  doc["schema"] = "lirelab.temperature_sweep";
  doc["version"] = kReportSchemaVersion;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    j["T"] = number(r.temperature);
    j["mean_reward"] = number(r.mean_reward);
    j["win_rate"] = number(r.win_rate);
    arr.push_back(std::move(j));
  }
  doc["rows"] = std::move(arr);
  out << doc.dump(2) << '\n';
}

void write_trace_csv(std::ostream& out, std::span<const TraceRow> rows) {
  CsvWriter csv(out, "lirelab.train_trace", kReportSchemaVersion,
                {"evolve", "iterate", "mean_loss", "mean_pool_reward", "expected_reward"});
  for (const auto& r : rows) {
    csv.row({static_cast<long long>(r.evolve), static_cast<long long>(r.iterate), r.mean_loss,
             r.mean_pool_reward, r.expected_reward});
  }
}

}  // namespace lirelab
