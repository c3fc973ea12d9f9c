#include <algorithm>
#include <cctype>
#include <chrono>

#include "lab/experiments.hpp"

namespace lab {
namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

const std::vector<ExperimentInfo>& experiments() {
  static const std::vector<ExperimentInfo> list{
      {"E1", "gelfond-corpus", "sign changes on the half circle against the doubling exponent on a seeded corpus",
       {{"corpus_size", 200}, {"max_degree", 30}, {"alt_seed_offset", 1}, {"combinatorial_max_n", 64}},
       run_gelfond_corpus},
      {"E2", "harmonic-area", "positivity area times log beta* on the seeded corpus, with area oracles",
       {{"corpus_size", 200},
        {"max_degree", 30},
        {"alt_seed_offset", 1},
        {"area_budget", 40000},
        {"mc_budget", 1000000},
        {"complement_count", 20}},
       run_harmonic_area},
      {"E3", "extremal-sweep", "area ratio of Re P_N times log N for the extremal construction",
       {{"N", {16, 32, 64, 128, 256, 512}},
        {"area_budget", 40000},
        {"mc_budget", 1000000},
        {"probes", 2000},
        {"cauchy_degree", 50},
        {"c4_grid", 40}},
       run_extremal_sweep},
      {"E4", "sphere-transplant", "spherical harmonics transplanted from P_N: residual, deviation and asymmetry",
       {{"N", {16, 32, 64, 128, 256}},
        {"residual_levels", {128, 256, 512, 1024}},
        {"area_budget", 40000},
        {"constructions_dir", ""}},
       run_sphere_transplant},
      {"E5", "schrodinger-suite", "positive solution, Beltrami coefficient, J convexity, three circles, ODE model",
       {{"q_constant", 0.05},
        {"family", "gaussian-bump"},
        {"family_sizes", {0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.08, 0.09, 0.0999}},
        {"solutions", 50},
        {"solution_q_norm", 0.08},
        {"calibration_offset", 1000},
        {"ode_systems", 20},
        {"ode_dim", 8},
        {"ode_horizon", 4.0},
        {"ode_steps", 4000}},
       run_schrodinger_suite},
      {"E6", "nadirashvili-sweep", "multi-start search for the Nadirashvili constants of the classes d",
       {{"classes", {2, 8, 16, 32, 64, 128, 256, 512}},
        {"restarts", 20},
        {"evaluation_budget", 50000},
        {"area_budget", 40000},
        {"constructions", {16, 32, 64, 128, 256, 512}},
        {"constructions_dir", ""},
        {"chain_from", ""}},
       run_nadirashvili_sweep},
      {"E7", "yau-statistics", "mean doubling exponent against nodal length of random spherical harmonics",
       {{"degrees", {10, 20, 40}},
        {"samples", 20},
        {"doubling_samples", 64},
        {"r_factor", 1.0},
        {"n_theta", 256},
        {"sectoral_tolerance", 0.02}},
       run_yau_statistics},
  };
  return list;
}

const ExperimentInfo& find_experiment(const std::string& key) {
  const std::string k = lower(key);
  for (const auto& e : experiments()) {
    if (lower(e.id) == k || e.name == k) return e;
  }
  throw UsageError("unknown experiment '" + key + "'");
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  const ExperimentInfo& info = find_experiment(config.experiment);
  const auto t0 = std::chrono::steady_clock::now();
  std::filesystem::create_directories(config.out);
  ExperimentReport r = info.run(config);
  r.experiment = info.id;
  r.config = config.echo();
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_report(r, config.out);
  return r;
}

}  // namespace lab
