#pragma once

#include <complex>
#include <vector>

namespace nodal {

using cplx = std::complex<double>;

/// Finite power series sum a_n z^n, valid on the closed disc of radius
/// `validity_radius` about the origin.
class CoefficientSeries {
public:
  CoefficientSeries() = default;
  CoefficientSeries(std::vector<cplx> coefficients, double validity_radius);

  static CoefficientSeries zero(double validity_radius = 1.0);

  const std::vector<cplx>& coefficients() const noexcept { return coefficients_; }
  double validity_radius() const noexcept { return validity_radius_; }
  int degree() const noexcept { return static_cast<int>(coefficients_.size()) - 1; }

  /// Horner evaluation; throws DomainError when |z| exceeds the radius.
  cplx operator()(cplx z) const;
  /// Real part, i.e. the harmonic function Re sum a_n z^n.
  double real_part(cplx z) const { return (*this)(z).real(); }

  /// Sum |a_n| |z|^n, the scale of rounding error in evaluation at z.
  double absolute_sum(double radius) const;

  /// Series of z -> s(scale * z), with validity radius shrunk accordingly.
  CoefficientSeries rescaled(double scale) const;

private:
  std::vector<cplx> coefficients_;
  double validity_radius_ = 1.0;
};

cplx eval_series(const CoefficientSeries& s, cplx z);

}  // namespace nodal
