#include "lab/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lab {
namespace {

std::string cell(const json& v) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return format_number(v.get<double>());
  return v.dump();
}

}  // namespace

void Table::add(std::vector<json> row) {
  if (row.size() != columns.size()) throw std::logic_error("table " + name + ": row width differs from header");
  rows.push_back(std::move(row));
}

std::size_t Table::column(const std::string& c) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == c) return i;
  }
  throw std::out_of_range("table " + name + " has no column " + c);
}

std::vector<double> Table::numbers(const std::string& c) const {
  const std::size_t i = column(c);
  std::vector<double> out;
  for (const auto& r : rows) out.push_back(r[i].get<double>());
  return out;
}

bool ExperimentReport::passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

Table& ExperimentReport::add_table(std::string name, std::string method, std::vector<std::string> columns) {
  tables.push_back({std::move(name), std::move(method), std::move(columns), {}});
  return tables.back();
}

const Table& ExperimentReport::table(const std::string& name) const {
  for (const auto& t : tables) {
    if (t.name == name) return t;
  }
  throw UsageError("report of " + experiment + " has no table '" + name + "'");
}

bool ExperimentReport::has_table(const std::string& name) const {
  for (const auto& t : tables) {
    if (t.name == name) return true;
  }
  return false;
}

void ExperimentReport::add_constant(std::string name, double value, std::string method) {
  constants.push_back({std::move(name), value, experiment, std::move(method)});
}

void ExperimentReport::check(int criterion, std::string name, bool ok, std::string detail) {
  checks.push_back({criterion, std::move(name), ok, std::move(detail)});
}

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string to_csv(const Table& t) {
  std::ostringstream s;
  for (std::size_t i = 0; i < t.columns.size(); ++i) s << (i ? "," : "") << t.columns[i];
  s << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) s << (i ? "," : "") << cell(row[i]);
    s << '\n';
  }
  return s.str();
}

json to_json(const ExperimentReport& r) {
  json tables = json::array();
  for (const auto& t : r.tables) {
    tables.push_back({{"name", t.name}, {"method", t.method}, {"columns", t.columns}, {"rows", t.rows}});
  }
  json constants = json::array();
  for (const auto& c : r.constants) {
    constants.push_back({{"name", c.name}, {"value", c.value}, {"experiment", c.experiment}, {"method", c.method}});
  }
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"criterion", c.criterion}, {"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  return {{"schema", "nodal_lab.report"},
          {"version", 1},
          {"experiment", r.experiment},
          {"config", r.config},
          {"tables", tables},
          {"constants", constants},
          {"checks", checks},
          {"passed", r.passed()}};
}

ExperimentReport report_from_json(const json& doc) {
  if (doc.value("schema", "") != "nodal_lab.report") throw std::runtime_error("not a nodal_lab report");
  ExperimentReport r;
  r.experiment = doc.at("experiment").get<std::string>();
  r.config = doc.at("config");
  for (const auto& t : doc.at("tables")) {
    Table& table = r.add_table(t.at("name"), t.at("method"), t.at("columns").get<std::vector<std::string>>());
    for (const auto& row : t.at("rows")) table.add(row.get<std::vector<json>>());
  }
  for (const auto& c : doc.at("constants")) {
    r.constants.push_back({c.at("name"), c.at("value").get<double>(), c.at("experiment"), c.at("method")});
  }
  for (const auto& c : doc.at("checks")) {
    r.checks.push_back({c.at("criterion").get<int>(), c.at("name"), c.at("passed").get<bool>(), c.at("detail")});
  }
  return r;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_report(const ExperimentReport& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_text(dir / "report.json", to_json(r).dump(2) + "\n");
  write_text(dir / "timing.json", json{{"experiment", r.experiment}, {"wall_seconds", r.wall_seconds}, {"timings", r.timings}}.dump(2) + "\n");
  for (const auto& t : r.tables) write_text(dir / (t.name + ".csv"), to_csv(t));
}

ExperimentReport read_report(const std::filesystem::path& path) {
  const auto file = std::filesystem::is_directory(path) ? path / "report.json" : path;
  return report_from_json(json::parse(read_text(file)));
}

}  // namespace lab
