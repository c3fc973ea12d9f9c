#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace nodal {

using RealField = std::function<double(std::complex<double>)>;
using AnalyticField = std::function<std::complex<double>(std::complex<double>)>;

struct Disc {
  std::complex<double> center{0.0, 0.0};
  double radius = 1.0;

  Disc() = default;
  Disc(std::complex<double> c, double r);

  /// Same centre, half the radius.
  Disc half() const { return Disc(center, 0.5 * radius); }
  bool contains(std::complex<double> z) const { return std::abs(z - center) <= radius; }
  double area() const;
};

enum class AreaMethod { GridRefined, MonteCarlo, PolarGrid, LatLongGrid };

std::string to_string(AreaMethod m);
AreaMethod area_method_from_string(const std::string& s);

struct AreaEstimate {
  double value = 0.0;
  double abs_error = 0.0;
  AreaMethod method = AreaMethod::GridRefined;
  std::uint64_t budget = 0;  // function evaluations (grid) or samples (monte-carlo)
};

/// True when |a - b| is within the combined error bars (plus `slack`).
bool agree_within_bars(const AreaEstimate& a, const AreaEstimate& b, double slack = 0.0);

struct ArgProfile {
  std::vector<double> angles;  // theta_0 < ... < theta_M, theta_M = theta_0 + 2 pi
  std::vector<double> phases;  // continuous lift of arg f(theta_k)

  /// (Theta_M - Theta_0) / 2 pi, rounded.
  int winding_number() const;
};

// ---- sign changes and maxima on circles --------------------------------

/// Angles in [0, 2 pi) of the sign alternations of f on the circle, each
/// refined by bisection to angular width 1e-10.
std::vector<double> sign_change_angles(const RealField& f, std::complex<double> center, double r,
                                       int hint_degree);

/// Number of sign alternations of f on the circle (always even).
int sign_changes_on_circle(const RealField& f, std::complex<double> center, double r,
                           int hint_degree);

/// Sign changes counted on n equispaced samples, no refinement. Used as a
/// brute-force reference.
int dense_scan_sign_changes(const RealField& f, std::complex<double> center, double r,
                            std::size_t n);

/// max |f| on the circle: dense sampling, then golden-section polish of the
/// best local maxima.
double max_on_circle(const RealField& f, std::complex<double> center, double r,
                     int hint_degree = 0);

struct PolarGridSpec {
  int n_radial = 512;
  int n_angular = 1024;
};

/// max |f| over the closed disc from a polar grid (radial nodes include the
/// centre and the boundary).
double max_on_disc_grid(const RealField& f, const Disc& D, const PolarGridSpec& grid);

// ---- doubling exponent ----------------------------------------------------

struct DoublingOptions {
  bool boundary_only = true;  // valid for harmonic / analytic inputs
  int hint_degree = 0;
  PolarGridSpec grid{};
};

/// beta = log(max_D |f| / max_{D/2} |f|).
double doubling_exponent(const RealField& f, const Disc& D, const DoublingOptions& opt = {});

/// Largest doubling exponent over the disc family centres x radii. A lower
/// bound for the supremum over all discs.
double doubling_sup(const RealField& f, const std::vector<std::complex<double>>& centers,
                    const std::vector<double>& radii, const DoublingOptions& opt = {});

// ---- argument -------------------------------------------------------------

/// Lifted phase of f on the circle. Density doubles until every step is
/// below pi/2. Throws PreconditionError if f (nearly) vanishes on the circle.
ArgProfile arg_profile(const AnalyticField& f, std::complex<double> center, double r,
                       int hint_degree);

/// Maximal increment of arg f over counterclockwise arcs of at most one turn
/// (the full circle included).
double arg_oscillation(const ArgProfile& profile);
double arg_oscillation(const AnalyticField& f, std::complex<double> center, double r,
                       int hint_degree);

/// Number of zeros inside the circle, by the argument principle.
int zero_count(const AnalyticField& f, std::complex<double> center, double r, int hint_degree = 0);

// ---- positivity area ------------------------------------------------------

struct AreaOptions {
  AreaMethod method = AreaMethod::GridRefined;
  std::uint64_t budget = 40000;  // base grid cells, or monte-carlo samples
  int refine_depth = 6;
  std::uint64_t seed = 0;
};

/// Area({f > 0} intersected with the disc).
AreaEstimate positivity_area(const RealField& f, const Disc& region, const AreaOptions& opt = {});

// ---- nodal length -----------------------------------------------------------

/// Samples on a uniform Cartesian grid: value(ix, iy) at (x0 + ix dx, y0 + iy dy).
struct PlanarGrid {
  int nx = 0, ny = 0;
  double x0 = 0.0, y0 = 0.0, dx = 0.0, dy = 0.0;
  std::vector<double> values;  // row-major, iy * nx + ix

  double at(int ix, int iy) const { return values[static_cast<std::size_t>(iy) * nx + ix]; }
};

/// Samples f on an n x n grid covering the bounding square of the disc.
PlanarGrid sample_planar(const RealField& f, const Disc& D, int n);

/// Length of the marching-squares zero contour; when `clip` is given only the
/// part inside the disc counts (segments are clipped exactly).
double nodal_length(const PlanarGrid& grid, const Disc* clip = nullptr);

/// Colatitude/longitude samples. theta_i = (i + 1/2) pi / n_theta avoids the
/// poles; phi_k = 2 pi k / n_phi is periodic.
struct SphereGrid {
  int n_theta = 0, n_phi = 0;
  std::vector<double> values;  // i * n_phi + k

  double theta(int i) const;
  double phi(int k) const;
  double at(int i, int k) const { return values[static_cast<std::size_t>(i) * n_phi + k]; }
};

/// Nodal length on the unit sphere; each segment is measured in the round
/// metric ds^2 = dtheta^2 + sin^2(theta_c) dphi^2 at its cell centre.
double nodal_length(const SphereGrid& grid);

/// N(x, r): sign changes of f on the circle of radius r about x.
int nodal_intersections(const RealField& f, std::complex<double> x, double r, int hint_degree = 0);

}  // namespace nodal
