#pragma once

#include <complex>
#include <numbers>

namespace nodal {

/// Tensor-product cut-off chi(x, y) = a(x) b(y) built from C^2 quintic ramps.
/// chi = 1 on {x > 0, |y| <= inner_half_width}, chi = 0 outside
/// {x > x_ramp_start, |y| <= outer_half_width}.
struct CutoffSpec {
  double x_ramp_start = -1.0;
  double x_ramp_end = 0.0;
  double inner_half_width = 2.0 * std::numbers::pi / 3.0;
  double outer_half_width = 4.0 * std::numbers::pi / 3.0;

  bool in_inner_strip(std::complex<double> z) const;
  bool in_outer_strip(std::complex<double> z) const;
  /// True on the closed set where dbar chi may be non-zero.
  bool in_transition(std::complex<double> z) const;
  /// Upper bound of |dbar chi| over the plane.
  double dbar_bound() const;
};

struct CutoffValue {
  double chi = 0.0;
  std::complex<double> dbar_chi{0.0, 0.0};
};

/// chi and dbar chi = (chi_x + i chi_y) / 2 from the closed-form ramp derivative.
CutoffValue cutoff_chi(const CutoffSpec& spec, std::complex<double> z);

/// Quintic smoothstep 6t^5 - 15t^4 + 10t^3 on [0, 1], clamped outside.
double smoothstep5(double t);
double smoothstep5_derivative(double t);

}  // namespace nodal
