#include "nodal/scaled_complex.hpp"

#include <cmath>
#include <numbers>

namespace nodal {

double wrap_phase(double angle) {
  double r = std::remainder(angle, 2.0 * std::numbers::pi);
  if (r <= -std::numbers::pi) r += 2.0 * std::numbers::pi;
  return r;
}

ScaledComplex ScaledComplex::from_log(double log_magnitude, double phase) {
  return {log_magnitude, wrap_phase(phase)};
}

ScaledComplex ScaledComplex::from_complex(std::complex<double> z) {
  if (z == 0.0) return zero();
  return {std::log(std::abs(z)), std::arg(z)};
}

std::complex<double> ScaledComplex::to_complex() const {
  if (is_zero()) return 0.0;
  return std::polar(std::exp(log_magnitude), phase);
}

std::complex<double> ScaledComplex::to_complex_scaled(double log_scale) const {
  if (is_zero()) return 0.0;
  return std::polar(std::exp(log_magnitude - log_scale), phase);
}

ScaledComplex ScaledComplex::operator-() const {
  if (is_zero()) return *this;
  return from_log(log_magnitude, phase + std::numbers::pi);
}

ScaledComplex operator*(const ScaledComplex& a, const ScaledComplex& b) {
  if (a.is_zero() || b.is_zero()) return ScaledComplex::zero();
  return ScaledComplex::from_log(a.log_magnitude + b.log_magnitude, a.phase + b.phase);
}

ScaledComplex operator/(const ScaledComplex& a, const ScaledComplex& b) {
  if (a.is_zero()) return ScaledComplex::zero();
  return ScaledComplex::from_log(a.log_magnitude - b.log_magnitude, a.phase - b.phase);
}

ScaledComplex operator+(const ScaledComplex& a, const ScaledComplex& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const ScaledComplex& big = a.log_magnitude >= b.log_magnitude ? a : b;
  const ScaledComplex& small = a.log_magnitude >= b.log_magnitude ? b : a;
  // small / big has modulus <= 1, so 1 + ratio is computed without overflow.
  std::complex<double> ratio = std::polar(std::exp(small.log_magnitude - big.log_magnitude),
                                          small.phase - big.phase);
  std::complex<double> sum = 1.0 + ratio;
  if (sum == 0.0) return ScaledComplex::zero();
  return ScaledComplex::from_log(big.log_magnitude + std::log(std::abs(sum)),
                                 big.phase + std::arg(sum));
}

ScaledComplex double_exponential(std::complex<double> z) {
  const double ex = std::exp(z.real());
  return ScaledComplex::from_log(ex * std::cos(z.imag()), ex * std::sin(z.imag()));
}

}  // namespace nodal
