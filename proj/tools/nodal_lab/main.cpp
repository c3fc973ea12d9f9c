#include <cstdio>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "lab/config.hpp"
#include "lab/experiments.hpp"
#include "lab/plot.hpp"

namespace {

enum Exit { kPass = 0, kAcceptanceFailure = 1, kUsage = 2, kInternal = 3 };

void print_checks(const lab::ExperimentReport& r) {
  for (const auto& c : r.checks) {
    std::printf("%s  [%d] %s: %s\n", c.passed ? "PASS" : "FAIL", c.criterion, c.name.c_str(), c.detail.c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nodal_lab: experiments on nodal sets and positivity areas"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run one experiment and write its report");
  std::string config_path, experiment, out;
  std::optional<std::uint64_t> seed;
  std::optional<double> budget_scale;
  std::vector<std::string> sets;
  bool also_plot = false;
  run->add_option("config", config_path, "TOML configuration file");
  run->add_option("-e,--experiment", experiment, "experiment id or name when no config file is given");
  run->add_option("--seed", seed, "override the seed");
  run->add_option("--out", out, "override the output directory");
  run->add_option("--budget-scale", budget_scale, "multiply every sampling budget")->check(CLI::PositiveNumber);
  run->add_option("--set", sets, "override a parameter, key=value");
  run->add_flag("--plot", also_plot, "write the plots next to the report");

  auto* plot = app.add_subcommand("plot", "render SVG plots of a report");
  std::string report_path, plot_out;
  plot->add_option("report", report_path, "report directory or report.json")->required();
  plot->add_option("--out", plot_out, "directory for the SVG files (default: <report>/plots)");

  auto* list = app.add_subcommand("list", "list experiments and their parameters");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kPass : kUsage;
  }

  try {
    if (list->parsed()) {
      for (const auto& e : lab::experiments()) {
        std::printf("%s  %-18s %s\n", e.id.c_str(), e.name.c_str(), e.description.c_str());
        std::printf("    params: %s\n", e.defaults.dump().c_str());
      }
      return kPass;
    }
    if (plot->parsed()) {
      const auto report = lab::read_report(report_path);
      const std::filesystem::path dir =
          plot_out.empty() ? (std::filesystem::is_directory(report_path) ? std::filesystem::path(report_path)
                                                                         : std::filesystem::path(report_path).parent_path()) /
                                 "plots"
                           : std::filesystem::path(plot_out);
      for (const auto& p : lab::plot_report(report, dir)) std::printf("%s\n", p.string().c_str());
      return kPass;
    }

    lab::ExperimentConfig config;
    if (!config_path.empty()) {
      config = lab::load_config(config_path);
      if (!experiment.empty() && lab::find_experiment(experiment).id != config.experiment) {
        throw lab::UsageError("--experiment disagrees with key 'experiment' of " + config_path);
      }
    } else if (!experiment.empty()) {
      config = lab::default_config(experiment);
    } else {
      throw lab::UsageError("run needs a config file or --experiment");
    }
    if (seed) config.seed = *seed;
    if (budget_scale) config.budget_scale = *budget_scale;
    if (!out.empty()) config.out = out;
    for (const auto& s : sets) lab::set_param(config, s);

    const auto report = lab::run_experiment(config);
    print_checks(report);
    if (also_plot) {
      for (const auto& p : lab::plot_report(report, config.out / "plots")) std::printf("%s\n", p.string().c_str());
    }
    std::printf("%s %s in %.1f s, report in %s\n", report.experiment.c_str(), report.passed() ? "passed" : "FAILED",
                report.wall_seconds, config.out.string().c_str());
    return report.passed() ? kPass : kAcceptanceFailure;
  } catch (const lab::UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kInternal;
  }
}
