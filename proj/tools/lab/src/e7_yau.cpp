#include <algorithm>
#include <cmath>
#include <numbers>

#include "common.hpp"
#include "lab/experiments.hpp"
#include "nodal/parallel.hpp"
#include "nodal/sphere.hpp"

namespace lab {

ExperimentReport run_yau_statistics(const ExperimentConfig& config) {
  ExperimentReport r;
  r.experiment = "E7";
  const auto degrees = config.get_ints("degrees");
  const int samples = config.get_int("samples");
  const int dsamples = static_cast<int>(config.scaled(static_cast<std::uint64_t>(config.get_int("doubling_samples")), 8));
  const double r_factor = config.get_double("r_factor");
  const int n_theta = config.get_int("n_theta");

  struct Job {
    int N, index;
  };
  std::vector<Job> jobs;
  for (int N : degrees) {
    for (int i = 0; i < samples; ++i) jobs.push_back({N, i});
  }
  std::vector<nodal::LengthVsDoubling> out(jobs.size());
  nodal::parallel_for(jobs.size(), [&](std::size_t k) {
    const auto [N, i] = jobs[k];
    const std::uint64_t s = nodal::substream_seed(config.seed, static_cast<std::uint64_t>(N) * 100000 + i);
    const auto f = nodal::random_eigenfunction(N, s);
    out[k] = nodal::nodal_length_vs_B1(f, {n_theta, 2 * n_theta}, r_factor, dsamples, s);
  });

  Table& t = r.add_table("e7_samples",
                         "length: marching squares on the lat-long grid, round metric; B1, Binf: doubling exponents "
                         "on discs of radius r_factor / sqrt(lambda), polar grid 32 x 64",
                         {"N", "sample", "lambda", "length", "length_scaled", "B1", "Binf", "ratio", "Binf_over_sqrt_lambda"});
  double rmin = INFINITY, rmax = 0.0, a = 0.0;
  std::vector<double> medians;
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    const auto& o = out[k];
    const double scaled = o.length / std::sqrt(o.lambda);
    t.add({jobs[k].N, jobs[k].index, o.lambda, o.length, scaled, o.B1, o.Binf, o.ratio, o.Binf / std::sqrt(o.lambda)});
    rmin = std::min(rmin, o.ratio);
    rmax = std::max(rmax, o.ratio);
    a = std::max(a, o.Binf / std::sqrt(o.lambda));
  }
  for (int N : degrees) {
    std::vector<double> v;
    for (std::size_t k = 0; k < jobs.size(); ++k) {
      if (jobs[k].N == N) v.push_back(out[k].ratio);
    }
    std::sort(v.begin(), v.end());
    if (!v.empty()) medians.push_back(v[v.size() / 2]);
  }
  const double C = std::max(rmax, 1.0 / rmin);
  r.add_constant("yau_band_C", C, "smallest C with all ratios B1 / (Length lambda^{-1/2}) in [1/C, C]");
  r.add_constant("donnelly_fefferman_a", a, "max of Binf / sqrt(lambda)");
  double drift = 0.0;
  if (!medians.empty()) {
    const auto [lo, hi] = std::minmax_element(medians.begin(), medians.end());
    drift = *hi / *lo;
  }
  r.check(11, "B1 / (Length lambda^{-1/2}) in one band [1/C, C] across degrees",
          std::isfinite(C) && rmin > 0.0 && drift <= 2.0,
          "C = " + format_number(C) + ", per-degree medians within factor " + format_number(drift));
  r.check(11, "Binf <= a sqrt(lambda) with one a", std::isfinite(a) && a > 0.0, "a = " + format_number(a));

  Table& sec = r.add_table("e7_sectoral", "marching squares on the lat-long grid against 2 pi N",
                           {"N", "length", "exact", "relative_error"});
  const double tol = config.get_double("sectoral_tolerance");
  bool sec_ok = true;
  for (int N : degrees) {
    const auto s = nodal::sample_sphere(nodal::sectoral_harmonic(N), {n_theta, 2 * n_theta});
    const double len = nodal::nodal_length(s.real_grid());
    const double exact = 2.0 * std::numbers::pi * N;
    const double rel = std::abs(len - exact) / exact;
    sec_ok = sec_ok && rel <= tol;
    sec.add({N, len, exact, rel});
  }
  r.check(11, "sectoral nodal length = 2 pi N within 2%", sec_ok, "degrees " + std::to_string(degrees.size()));
  return r;
}

}  // namespace lab
