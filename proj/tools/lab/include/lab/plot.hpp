#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lab/report.hpp"

namespace lab {

struct Series {
  std::string label;
  std::vector<double> x, y;
  bool line = false;
  std::string color = "#1f77b4";
};

/// Minimal self-contained SVG chart with linear or logarithmic axes.
struct SvgPlot {
  std::string title;
  std::string x_label, y_label;
  bool log_x = false, log_y = false;
  std::vector<Series> series;

  std::string render() const;
};

/// Writes the plots of a report into `dir`; returns the written files.
std::vector<std::filesystem::path> plot_report(const ExperimentReport& report, const std::filesystem::path& dir);

/// The plot of one report, without writing it.
std::vector<std::pair<std::string, SvgPlot>> report_plots(const ExperimentReport& report);

}  // namespace lab
