#include "nodal/cutoff.hpp"

#include <cmath>

namespace nodal {

double smoothstep5(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double smoothstep5_derivative(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double s = t * (1.0 - t);
  return 30.0 * s * s;
}

bool CutoffSpec::in_inner_strip(std::complex<double> z) const {
  return z.real() > x_ramp_end && std::abs(z.imag()) <= inner_half_width;
}

bool CutoffSpec::in_outer_strip(std::complex<double> z) const {
  return z.real() > x_ramp_start && std::abs(z.imag()) <= outer_half_width;
}

bool CutoffSpec::in_transition(std::complex<double> z) const {
  const double x = z.real(), ay = std::abs(z.imag());
  if (x < x_ramp_start || ay > outer_half_width) return false;
  return x <= x_ramp_end || ay >= inner_half_width;
}

double CutoffSpec::dbar_bound() const {
  const double ax = 1.875 / (x_ramp_end - x_ramp_start);
  const double by = 1.875 / (outer_half_width - inner_half_width);
  return 0.5 * std::hypot(ax, by);
}

CutoffValue cutoff_chi(const CutoffSpec& spec, std::complex<double> z) {
  const double x = z.real(), y = z.imag(), ay = std::abs(y);
  const double xw = spec.x_ramp_end - spec.x_ramp_start;
  const double yw = spec.outer_half_width - spec.inner_half_width;
  const double tx = (x - spec.x_ramp_start) / xw;
  const double ty = (ay - spec.inner_half_width) / yw;

  const double a = smoothstep5(tx);
  const double b = 1.0 - smoothstep5(ty);
  CutoffValue out;
  out.chi = a * b;
  const double da = smoothstep5_derivative(tx) / xw;
  double db = -smoothstep5_derivative(ty) / yw;
  if (y < 0.0) db = -db;
  // Exact zeros away from the ramps: both products vanish identically there.
  out.dbar_chi = 0.5 * std::complex<double>(da * b, a * db);
  return out;
}

}  // namespace nodal
