#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "nodal/scaled_complex.hpp"

namespace nodal {

using ScaledField = std::function<ScaledComplex(std::complex<double>)>;

struct CauchyOptions {
  /// Consecutive degrees sharing one circle (and one FFT).
  int bucket = 16;
  int min_samples = 256;
  /// Samples per circle >= oversample * (largest degree of the bucket).
  int oversample = 2;
  /// Relative rounding level of the sampled values.
  double relative_noise = 1e-15;
  /// Absolute error of the sampled values (e.g. quadrature error).
  double absolute_noise = 0.0;
};

/// Taylor coefficients of g about 0 by trapezoidal Cauchy integrals. Each
/// coefficient is stored in log form so that neither g on the circle nor the
/// coefficient itself needs to be representable as a double.
struct CauchyCoefficients {
  std::vector<ScaledComplex> a;        // n = 0..n_max
  std::vector<double> radius;          // circle used for a_n
  std::vector<double> log_noise;       // log of the absolute error bound of a_n
  std::vector<double> log_circle_max;  // log max |g| on that circle

  int n_max() const { return static_cast<int>(a.size()) - 1; }
};

/// `radius_for(n)` gives the circle for degree n; the bucket uses the value
/// at its middle degree.
CauchyCoefficients cauchy_coefficients(const ScaledField& g, int n_max,
                                       const std::function<double(int)>& radius_for,
                                       const CauchyOptions& opt = {});

}  // namespace nodal
