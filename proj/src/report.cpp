#include "uwsn/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "uwsn/scenario_file.hpp"
#include "uwsn/stats.hpp"

#ifndef UWSN_VERSION
#define UWSN_VERSION "dev"
#endif

namespace uwsn {

std::string format_cell(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

void write_table_csv(std::ostream& out, const Table& table, const std::string& hash) {
  out << "# config_hash=" << hash << '\n';
  if (!table.raw.empty()) {
    out << table.raw;
    return;
  }
  for (std::size_t i = 0; i < table.header.size(); ++i) out << (i ? "," : "") << table.header[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
}

void write_table_text(std::ostream& out, const Table& table) {
  if (!table.raw.empty()) return;
  std::vector<std::size_t> width(table.header.size(), 0);
  for (std::size_t i = 0; i < table.header.size(); ++i) width[i] = table.header[i].size();
  for (const auto& row : table.rows)
    for (std::size_t i = 0; i < row.size() && i < width.size(); ++i) width[i] = std::max(width[i], row[i].size());
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size() && i < width.size(); ++i) {
      out << (i ? "  " : "") << cells[i];
      if (i + 1 < cells.size()) out << std::string(width[i] - cells[i].size(), ' ');
    }
    out << '\n';
  };
  out << table.name << '\n';
  line(table.header);
  for (const auto& row : table.rows) line(row);
}

void emit_report(const std::filesystem::path& dir, const std::vector<Table>& tables,
                 const std::vector<std::string>& summary_lines, const ReportMetadata& metadata) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::io, "cannot create output directory " + dir.string() + ": " + ec.message());

  auto open = [&](const std::string& file) {
    std::ofstream out(dir / file, std::ios::binary);
    if (!out) throw Error(ErrorCode::io, "cannot write " + (dir / file).string());
    return out;
  };

  std::vector<std::string> files;
  for (const auto& table : tables) {
    auto out = open(table.name + ".csv");
    write_table_csv(out, table, metadata.config_hash);
    files.push_back(table.name + ".csv");
  }

  {
    auto out = open("summary.txt");
    out << "config_hash " << metadata.config_hash << '\n';
    for (const auto& l : summary_lines) out << l << '\n';
    for (const auto& table : tables) {
      if (!table.raw.empty() || table.rows.size() > 60) continue;
      out << '\n';
      write_table_text(out, table);
    }
    files.push_back("summary.txt");
  }

  nlohmann::json meta;
  meta["command"] = metadata.command;
  meta["config_hash"] = metadata.config_hash;
  meta["version"] = UWSN_VERSION;
  meta["seeds"] = metadata.seeds;
  meta["overrides"] = nlohmann::json::object();
  for (const auto& [k, v] : metadata.overrides) meta["overrides"][k] = v;
  meta["notes"] = metadata.notes;
  meta["scenario"] = metadata.scenario;
  meta["files"] = files;
  auto out = open("metadata.json");
  out << meta.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::io, "cannot write " + (dir / "metadata.json").string());
}

std::vector<Table> scenario_tables(const SimulationReport& report, std::size_t detail_seeds) {
  std::vector<Table> tables;

  Table runs{"runs",
             {"seed", "compromised", "rounds_to_compromise", "rounds_run", "data_generated", "data_compromised",
              "data_decoded", "seizure_pct", "mean_dfk_hops", "mean_dfk_meters", "energy_j", "instructions",
              "header_bytes_total", "table_bytes_max", "hole_fallbacks"},
             {},
             {}};
  std::size_t max_round = 0;
  for (const auto& r : report.runs) {
    max_round = std::max(max_round, r.rounds_run);
    runs.rows.push_back({std::to_string(r.seed), r.compromised() ? "1" : "0",
                         r.rounds_to_compromise ? std::to_string(*r.rounds_to_compromise) : "",
                         std::to_string(r.rounds_run), std::to_string(r.data_generated),
                         std::to_string(r.data_compromised), std::to_string(r.data_decoded),
                         format_cell(r.seizure_percentage()),
                         format_cell(r.dfk_hops.empty() ? 0.0 : stats::mean(r.dfk_hops)),
                         format_cell(r.dfk_meters.empty() ? 0.0 : stats::mean(r.dfk_meters)),
                         format_cell(r.energy.total()), std::to_string(r.overhead.instruction_count),
                         std::to_string(r.overhead.header_bytes_total),
                         std::to_string(r.overhead.table_bytes_max()), std::to_string(r.overhead.hole_fallbacks)});
  }
  tables.push_back(std::move(runs));

  Table curve{"curve", {"round", "seizure_pct"}, {}, {}};
  const auto values = report.seizure_curve(max_round);
  for (std::size_t j = 0; j < values.size(); ++j) curve.rows.push_back({std::to_string(j + 1), format_cell(values[j])});
  tables.push_back(std::move(curve));

  for (std::size_t i = 0; i < std::min(detail_seeds, report.runs.size()); ++i) {
    const RunReport& r = report.runs[i];
    const std::string tag = "_seed" + std::to_string(r.seed);
    std::ostringstream events, path, plans, node_energy, datum_energy;
    write_events_csv(events, r.events);
    write_attacker_path_csv(path, r.attack_path);
    write_plan_csv(plans, r.plans);
    write_node_energy_csv(node_energy, r.energy);
    write_datum_energy_csv(datum_energy, r.energy);
    tables.push_back({"events" + tag, {}, {}, events.str()});
    tables.push_back({"attack_path" + tag, {}, {}, path.str()});
    tables.push_back({"placements" + tag, {}, {}, plans.str()});
    tables.push_back({"node_energy" + tag, {}, {}, node_energy.str()});
    tables.push_back({"datum_energy" + tag, {}, {}, datum_energy.str()});
  }
  return tables;
}

std::vector<std::string> scenario_summary(const SimulationReport& report) {
  std::vector<std::string> lines;
  const auto [lo, hi] = report.seizure_interval();
  lines.push_back("runs " + std::to_string(report.runs.size()));
  lines.push_back("compromised_runs " + std::to_string(report.compromised_runs()));
  lines.push_back("seizure_pct " + format_cell(report.seizure_percentage()) + " (95% CI of run share " +
                  format_cell(lo) + " .. " + format_cell(hi) + ")");
  const auto rtc = report.rounds_to_compromise();
  if (!rtc.empty()) {
    std::vector<double> v(rtc.begin(), rtc.end());
    lines.push_back("mean_rounds_to_compromise " + format_cell(stats::mean(v)));
  }
  lines.push_back("mean_dfk_hops " + format_cell(report.mean_dfk_hops()));
  lines.push_back("mean_dfk_meters " + format_cell(report.mean_dfk_meters()));
  return lines;
}

Table sweep_table(const std::vector<SweepCell>& cells, const std::vector<SweepAxis>& axes) {
  Table table{"sweep", {}, {}, {}};
  for (const auto& axis : axes) table.header.push_back(axis.key);
  for (const char* col : {"runs", "compromised_runs", "seizure_pct", "ci_low", "ci_high", "mean_rounds_to_compromise",
                          "mean_dfk_hops", "error"})
    table.header.emplace_back(col);
  for (const auto& cell : cells) {
    std::vector<std::string> row;
    for (const auto& [key, value] : cell.overrides) row.push_back(value);
    if (cell.report) {
      const auto& r = *cell.report;
      const auto [lo, hi] = r.seizure_interval();
      const auto rtc = r.rounds_to_compromise();
      std::vector<double> v(rtc.begin(), rtc.end());
      row.insert(row.end(), {std::to_string(r.runs.size()), std::to_string(r.compromised_runs()),
                             format_cell(r.seizure_percentage()), format_cell(lo), format_cell(hi),
                             v.empty() ? "" : format_cell(stats::mean(v)), format_cell(r.mean_dfk_hops()), ""});
    } else {
      std::string message = cell.error;
      std::replace(message.begin(), message.end(), ',', ';');
      row.insert(row.end(), {"0", "0", "", "", "", "", "", message});
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace uwsn
