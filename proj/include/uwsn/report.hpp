#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "uwsn/engine.hpp"

namespace uwsn {

/// A named CSV table. Rows hold preformatted cells; `raw` instead carries
/// CSV text (header included) produced by a module writer.
struct Table {
  std::string name;  // file stem
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::string raw;
};

/// Writes `# config_hash=<hash>` followed by the header and rows.
void write_table_csv(std::ostream& out, const Table& table, const std::string& hash);

/// Fixed-width text rendering of a table for terminals and summary files.
void write_table_text(std::ostream& out, const Table& table);

struct ReportMetadata {
  std::string command;
  std::string config_hash;
  std::vector<std::uint64_t> seeds;
  std::vector<std::pair<std::string, std::string>> overrides;
  std::vector<std::string> notes;
  std::string scenario;  // canonical scenario text
};

/// Writes every table as <name>.csv, a summary.txt with the text rendering
/// plus `summary_lines`, and metadata.json. Throws io when the directory
/// cannot be created or written.
void emit_report(const std::filesystem::path& dir, const std::vector<Table>& tables,
                 const std::vector<std::string>& summary_lines, const ReportMetadata& metadata);

/// Per-seed rows, the seizure curve, and aggregate lines for one scenario.
std::vector<Table> scenario_tables(const SimulationReport& report, std::size_t detail_seeds = 1);
std::vector<std::string> scenario_summary(const SimulationReport& report);

/// One row per sweep cell: the axis values followed by aggregate metrics.
Table sweep_table(const std::vector<SweepCell>& cells, const std::vector<SweepAxis>& axes);

std::string format_cell(double value);

}  // namespace uwsn
