#include "nodal/series.hpp"

#include <cmath>
#include <sstream>

#include "nodal/errors.hpp"

namespace nodal {

CoefficientSeries::CoefficientSeries(std::vector<cplx> coefficients, double validity_radius)
    : coefficients_(std::move(coefficients)), validity_radius_(validity_radius) {
  if (!(validity_radius_ > 0.0)) throw DomainError("CoefficientSeries: validity radius must be positive");
  if (coefficients_.empty()) coefficients_.push_back(0.0);
}

CoefficientSeries CoefficientSeries::zero(double validity_radius) {
  return CoefficientSeries({cplx(0.0)}, validity_radius);
}

cplx CoefficientSeries::operator()(cplx z) const {
  // Relative slack so points generated on the boundary circle are accepted.
  if (std::abs(z) > validity_radius_ * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "eval_series: |z| = " << std::abs(z) << " exceeds validity radius " << validity_radius_;
    throw DomainError(msg.str());
  }
  cplx acc = 0.0;
  for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

double CoefficientSeries::absolute_sum(double radius) const {
  double acc = 0.0;
  for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) acc = acc * radius + std::abs(*it);
  return acc;
}

CoefficientSeries CoefficientSeries::rescaled(double scale) const {
  std::vector<cplx> out(coefficients_.size());
  double power = 1.0;
  for (std::size_t n = 0; n < coefficients_.size(); ++n) {
    out[n] = coefficients_[n] * power;
    power *= scale;
  }
  return CoefficientSeries(std::move(out), validity_radius_ / scale);
}

cplx eval_series(const CoefficientSeries& s, cplx z) { return s(z); }

}  // namespace nodal
