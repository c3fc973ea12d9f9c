#pragma once

#include <deque>
#include <filesystem>
#include <string>
#include <vector>

#include "lab/config.hpp"

namespace lab {

struct Table {
  std::string name;
  std::string method;  // how the numbers were measured
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;

  void add(std::vector<json> row);
  std::size_t column(const std::string& name) const;
  std::vector<double> numbers(const std::string& column) const;
};

/// A measured constant and the experiment that produced it.
struct Constant {
  std::string name;
  double value = 0.0;
  std::string experiment;
  std::string method;
};

struct Check {
  int criterion = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ExperimentReport {
  std::string experiment;
  json config;
  std::deque<Table> tables;  // deque: references from add_table stay valid
  std::vector<Constant> constants;
  std::vector<Check> checks;
  double wall_seconds = 0.0;
  json timings = json::object();  // written to timing.json only

  bool passed() const;
  Table& add_table(std::string name, std::string method, std::vector<std::string> columns);
  /// Throws UsageError naming the missing table.
  const Table& table(const std::string& name) const;
  bool has_table(const std::string& name) const;
  void add_constant(std::string name, double value, std::string method);
  void check(int criterion, std::string name, bool passed, std::string detail);
};

/// Fixed-width decimal used in every CSV and table cell.
std::string format_number(double x);

std::string to_csv(const Table& t);
json to_json(const ExperimentReport& r);
ExperimentReport report_from_json(const json& doc);

/// report.json, timing.json and one CSV per table.
void write_report(const ExperimentReport& r, const std::filesystem::path& dir);
/// Accepts the report directory or the report.json path.
ExperimentReport read_report(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace lab
