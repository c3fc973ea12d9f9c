#include "lab/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "lab/experiments.hpp"
#include "toml.hpp"

namespace lab {
namespace {

json from_toml(const toml::node& node, const std::string& key) {
  if (auto v = node.as_integer()) return v->get();
  if (auto v = node.as_floating_point()) return v->get();
  if (auto v = node.as_boolean()) return v->get();
  if (auto v = node.as_string()) return v->get();
  if (auto arr = node.as_array()) {
    json out = json::array();
    for (const auto& item : *arr) out.push_back(from_toml(item, key));
    return out;
  }
  throw UsageError("unsupported value type for key '" + key + "'");
}

// Checks `value` against the type of `reference`; integers are accepted where
// floats are expected.
json coerce(const json& value, const json& reference, const std::string& key) {
  const auto mismatch = [&] { return UsageError("wrong type for key '" + key + "': expected " + reference.type_name()); };
  if (reference.is_number_float()) {
    if (!value.is_number()) throw mismatch();
    return value.get<double>();
  }
  if (reference.is_number_integer()) {
    if (!value.is_number_integer()) throw mismatch();
    return value;
  }
  if (reference.is_array()) {
    if (!value.is_array()) throw mismatch();
    if (reference.empty()) return value;
    json out = json::array();
    for (std::size_t i = 0; i < value.size(); ++i) out.push_back(coerce(value[i], reference[0], key + "[" + std::to_string(i) + "]"));
    return out;
  }
  if (value.type() != reference.type()) throw mismatch();
  return value;
}

std::uint64_t parse_seed(const json& v, const std::string& key) {
  if (!v.is_number_integer() || v.get<long long>() < 0) throw UsageError("key '" + key + "' must be a non-negative integer");
  return v.get<std::uint64_t>();
}

const json& param(const ExperimentConfig& c, const std::string& key) {
  auto it = c.params.find(key);
  if (it == c.params.end()) throw UsageError("unknown key 'params." + key + "' for " + c.experiment);
  return *it;
}

}  // namespace

std::uint64_t ExperimentConfig::scaled(std::uint64_t budget, std::uint64_t floor) const {
  const double v = std::round(static_cast<double>(budget) * budget_scale);
  return std::max<std::uint64_t>(floor, static_cast<std::uint64_t>(std::max(v, 0.0)));
}

int ExperimentConfig::get_int(const std::string& key) const { return param(*this, key).get<int>(); }
double ExperimentConfig::get_double(const std::string& key) const { return param(*this, key).get<double>(); }
std::string ExperimentConfig::get_string(const std::string& key) const { return param(*this, key).get<std::string>(); }
std::vector<int> ExperimentConfig::get_ints(const std::string& key) const { return param(*this, key).get<std::vector<int>>(); }

json ExperimentConfig::echo() const {
  return {{"experiment", experiment}, {"seed", seed}, {"budget_scale", budget_scale}, {"params", params}};
}

ExperimentConfig default_config(const std::string& id) {
  const ExperimentInfo& info = find_experiment(id);
  ExperimentConfig c;
  c.experiment = info.id;
  c.params = info.defaults;
  c.out = "out/" + info.name;
  return c;
}

ExperimentConfig parse_config(const std::string& toml_text) {
  toml::table doc;
  try {
    doc = toml::parse(toml_text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "invalid TOML at line " << e.source().begin.line << ": " << e.description();
    throw UsageError(msg.str());
  }
  const auto* id = doc.get("experiment");
  if (id == nullptr || !id->is_string()) throw UsageError("missing key 'experiment'");
  ExperimentConfig c = default_config(id->as_string()->get());

  for (const auto& [k, node] : doc) {
    const std::string key(k.str());
    if (key == "experiment") continue;
    if (key == "seed") {
      c.seed = parse_seed(from_toml(node, key), key);
    } else if (key == "budget_scale") {
      const json v = from_toml(node, key);
      if (!v.is_number() || v.get<double>() <= 0.0) throw UsageError("key 'budget_scale' must be a positive number");
      c.budget_scale = v.get<double>();
    } else if (key == "out") {
      if (!node.is_string()) throw UsageError("key 'out' must be a string");
      c.out = node.as_string()->get();
    } else if (key == "params") {
      const auto* table = node.as_table();
      if (table == nullptr) throw UsageError("key 'params' must be a table");
      for (const auto& [pk, pnode] : *table) {
        const std::string name(pk.str());
        auto it = c.params.find(name);
        if (it == c.params.end()) throw UsageError("unknown key 'params." + name + "' for " + c.experiment);
        *it = coerce(from_toml(pnode, "params." + name), *it, "params." + name);
      }
    } else {
      throw UsageError("unknown key '" + key + "'");
    }
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path.string() + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return parse_config(s.str());
}

void set_param(ExperimentConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw UsageError("expected key=value, got '" + assignment + "'");
  const std::string key = assignment.substr(0, eq);
  auto it = config.params.find(key);
  if (it == config.params.end()) throw UsageError("unknown key 'params." + key + "' for " + config.experiment);
  toml::table doc;
  try {
    doc = toml::parse("v = " + assignment.substr(eq + 1));
  } catch (const toml::parse_error&) {
    throw UsageError("cannot parse value of key 'params." + key + "'");
  }
  *it = coerce(from_toml(*doc.get("v"), "params." + key), *it, "params." + key);
}

}  // namespace lab
