#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lab/config.hpp"
#include "lab/report.hpp"

namespace lab {

struct ExperimentInfo {
  std::string id;    // "E1"
  std::string name;  // "gelfond-corpus"
  std::string description;
  json defaults;
  std::function<ExperimentReport(const ExperimentConfig&)> run;
};

const std::vector<ExperimentInfo>& experiments();
/// By id or name, case-insensitive; UsageError if unknown.
const ExperimentInfo& find_experiment(const std::string& key);

/// Runs the experiment, writes its report into config.out and returns it.
ExperimentReport run_experiment(const ExperimentConfig& config);

ExperimentReport run_gelfond_corpus(const ExperimentConfig& config);
ExperimentReport run_harmonic_area(const ExperimentConfig& config);
ExperimentReport run_extremal_sweep(const ExperimentConfig& config);
ExperimentReport run_sphere_transplant(const ExperimentConfig& config);
ExperimentReport run_schrodinger_suite(const ExperimentConfig& config);
ExperimentReport run_nadirashvili_sweep(const ExperimentConfig& config);
ExperimentReport run_yau_statistics(const ExperimentConfig& config);

/// Header of the E3 table, fixed.
inline constexpr const char* kExtremalCsvHeader =
    "N,r_N,kappa,area_ratio_margin0,area_ratio_marginK,abs_error,area_ratio_times_logN";

}  // namespace lab
