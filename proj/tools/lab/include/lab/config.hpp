#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace lab {

using json = nlohmann::json;

/// Invalid configuration or command line; the message names the offending key.
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string experiment;  // "E1" .. "E7"
  std::uint64_t seed = 0;
  double budget_scale = 1.0;
  std::filesystem::path out = "out";
  json params = json::object();  // defaults merged with the file

  /// budget * budget_scale, rounded, at least `floor`.
  std::uint64_t scaled(std::uint64_t budget, std::uint64_t floor = 1) const;

  int get_int(const std::string& key) const;
  double get_double(const std::string& key) const;
  std::string get_string(const std::string& key) const;
  std::vector<int> get_ints(const std::string& key) const;

  /// Echo for reports; the output directory is left out so that reports of
  /// identical runs are identical.
  json echo() const;
};

/// Default configuration of an experiment id (case-insensitive, "E3" or "extremal-sweep").
ExperimentConfig default_config(const std::string& id);

/// TOML document: top-level `experiment`, `seed`, `budget_scale`, `out` and a
/// `[params]` table. Unknown keys and type mismatches raise UsageError.
ExperimentConfig parse_config(const std::string& toml_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Applies "key=value" where value is parsed as a TOML value.
void set_param(ExperimentConfig& config, const std::string& assignment);

}  // namespace lab
