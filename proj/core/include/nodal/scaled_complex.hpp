#pragma once

#include <complex>
#include <limits>

namespace nodal {

/// exp(log_magnitude + i * phase). Carries values whose modulus is far outside
/// the double range, such as exp(exp(z)) for Re z of a few units.
struct ScaledComplex {
  double log_magnitude = -std::numeric_limits<double>::infinity();
  double phase = 0.0;  // in (-pi, pi]

  static ScaledComplex zero() { return {}; }
  static ScaledComplex from_log(double log_magnitude, double phase);
  static ScaledComplex from_complex(std::complex<double> z);

  bool is_zero() const noexcept {
    return log_magnitude == -std::numeric_limits<double>::infinity();
  }

  /// Native value; overflows to inf / underflows to 0 outside the double range.
  std::complex<double> to_complex() const;
  /// Native value of this * exp(-log_scale).
  std::complex<double> to_complex_scaled(double log_scale) const;

  ScaledComplex operator-() const;
  friend ScaledComplex operator*(const ScaledComplex& a, const ScaledComplex& b);
  friend ScaledComplex operator/(const ScaledComplex& a, const ScaledComplex& b);
  friend ScaledComplex operator+(const ScaledComplex& a, const ScaledComplex& b);
  friend ScaledComplex operator-(const ScaledComplex& a, const ScaledComplex& b) {
    return a + (-b);
  }
  ScaledComplex& operator+=(const ScaledComplex& o) { return *this = *this + o; }
  ScaledComplex& operator*=(const ScaledComplex& o) { return *this = *this * o; }
};

/// Wraps an angle into (-pi, pi].
double wrap_phase(double angle);

/// exp(exp(z)) as a ScaledComplex: log-modulus e^x cos y, phase e^x sin y.
ScaledComplex double_exponential(std::complex<double> z);

}  // namespace nodal
