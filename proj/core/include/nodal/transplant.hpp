#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "nodal/extremal.hpp"
#include "nodal/metrics.hpp"
#include "nodal/sphere.hpp"

namespace nodal {

struct TransplantOptions {
  int log_samples = 400;      // r in [1e-6, 1], log spaced
  int uniform_samples = 400;  // r in (0, 1], uniform
};

/// f_N = sum_j beta_j e_j with beta_j = alpha_j / (A_j delta^j), A_j = L_N^{(j)}(1),
/// so that on the chart disc delta D about the north pole
///   f_N(delta z) = F_N(z) = sum_j alpha_j (L_N^{(j)}(sqrt(1 - delta^2 |z|^2)) / A_j) z^j,
/// which differs from P_N(z) by at most delta M_N.
class SphericalTransplant {
public:
  SphericalTransplant() = default;
  SphericalTransplant(std::vector<std::complex<double>> alpha, double kappa, double log_delta,
                      double log_M, double max_B_over_A);

  int degree() const noexcept { return N_; }
  double lambda() const noexcept { return static_cast<double>(N_) * (N_ + 1); }
  double kappa() const noexcept { return kappa_; }
  double delta() const noexcept { return std::exp(log_delta_); }
  double log_delta() const noexcept { return log_delta_; }
  /// log M_N, M_N = max_j max_r |B_j / A_j| * sum_j |alpha_j|.
  double log_M() const noexcept { return log_M_; }
  double max_B_over_A() const noexcept { return max_B_over_A_; }
  /// delta M_N = kappa / 2.
  double deviation_bound() const { return std::exp(log_delta_ + log_M_); }

  const std::vector<std::complex<double>>& alpha() const noexcept { return alpha_; }
  const SphericalHarmonicExpansion& expansion() const noexcept { return f_; }
  GeodesicDisc disc() const { return {SpherePoint::north_pole(), delta()}; }

  /// F_N(z) for |z| <= 1, by the Taylor expansion of L_N^{(j)} about 1.
  std::complex<double> F(std::complex<double> z) const;
  std::complex<double> F(double r, double theta) const { return F(std::polar(r, theta)); }
  /// f_N at chart point delta z, through the spherical basis.
  ScaledComplex f_chart(std::complex<double> z) const;
  /// P_N(z).
  std::complex<double> P(std::complex<double> z) const;

  int radial_terms() const noexcept { return static_cast<int>(radial_.size()); }

  // Provenance carried into serialization.
  double r_N = 0.0;
  double c4 = 0.0;
  std::string quadrature;
  std::uint64_t seed = 0;

private:
  int N_ = 0;
  double kappa_ = 0.25;
  double log_delta_ = 0.0;
  double log_M_ = 0.0;
  double max_B_over_A_ = 0.0;
  std::vector<std::complex<double>> alpha_;
  SphericalHarmonicExpansion f_;
  // radial_[k][j] = alpha_j (A_{j+k} / A_j) / k!, so F = sum_k (-t)^k radial_k(z), t = 1 - x3.
  std::vector<std::vector<std::complex<double>>> radial_;
};

/// max_j max_{0 < r <= 1} |B_j(r) / A_j|, B_j(r) = (L_N^{(j)}(sqrt(1 - r^2)) - A_j) / r.
double max_B_over_A(int N, const TransplantOptions& opt = {});

SphericalTransplant transplant(const ExtremalPolynomial& P, const TransplantOptions& opt = {});

struct TransplantDeviation {
  double max_deviation = 0.0;  // sup over the grid of |F_N - P_N|
  double bound = 0.0;          // delta M_N
  double kappa = 0.0;
  std::size_t samples = 0;
  bool passed() const { return max_deviation <= bound && bound < kappa; }
};

TransplantDeviation transplant_deviation(const SphericalTransplant& T, PolarGridSpec grid = {64, 256});

/// max |f_chart(z) - F_N(z)| / max(1, sum_j |alpha_j| |z|^j) over a polar grid.
double transplant_consistency(const SphericalTransplant& T, PolarGridSpec grid = {16, 64});

struct TransplantArea {
  /// Area_s({Re f_N > -margin} in D_N) / Area_s(D_N), with abs_error on the ratio.
  AreaEstimate ratio;
  double margin = 0.0;
  double spherical_disc_area = 0.0;
  double log_lambda = 0.0;
  double ratio_times_log_lambda() const { return ratio.value * log_lambda; }
};

/// The chart disc is remapped radially so that spherical area becomes
/// Euclidean area on the unit disc, then measured with positivity_area.
TransplantArea transplant_area(const SphericalTransplant& T, const AreaOptions& opt, double margin = 0.0);

std::string to_json(const SphericalTransplant& T);
SphericalTransplant transplant_from_json(const std::string& text);

}  // namespace nodal
