#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "lab/report.hpp"
#include "nodal/extremal.hpp"

namespace lab {

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// P_N for each N: read from dir/P_<N>.json when dir is non-empty and the file
/// exists, otherwise built with one shared builder.
inline std::vector<nodal::ExtremalPolynomial> load_or_build(const std::vector<int>& Ns, const std::string& dir,
                                                            const nodal::ExtremalConfig& config) {
  std::vector<nodal::ExtremalPolynomial> out;
  std::unique_ptr<nodal::ExtremalBuilder> builder;
  for (int N : Ns) {
    const auto path = std::filesystem::path(dir) / ("P_" + std::to_string(N) + ".json");
    if (!dir.empty() && std::filesystem::exists(path)) {
      out.push_back(nodal::extremal_from_json(read_text(path)));
      continue;
    }
    if (!builder) builder = std::make_unique<nodal::ExtremalBuilder>(config);
    out.push_back(builder->build(N));
  }
  return out;
}

}  // namespace lab
