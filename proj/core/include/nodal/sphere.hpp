#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "nodal/metrics.hpp"
#include "nodal/scaled_complex.hpp"

namespace nodal {

struct SpherePoint {
  double x = 0.0, y = 0.0, z = 1.0;

  static SpherePoint from_angles(double theta, double phi);
  /// Normalises (x, y, z); DomainError for the zero vector.
  static SpherePoint from_vector(double x, double y, double z);
  static SpherePoint north_pole() { return {}; }

  double theta() const;
  double phi() const;
  /// x1 + i x2, the chart coordinate of the upper hemisphere.
  std::complex<double> chart() const { return {x, y}; }
};

/// Disc {x1 + i x2 in chart_radius * D} lifted to the sphere around `center`.
struct GeodesicDisc {
  SpherePoint center;
  double chart_radius = 0.5;

  double geodesic_radius() const;
  double spherical_area() const;  // 2 pi (1 - sqrt(1 - r^2))
};

/// Point of the sphere with chart coordinate w in the tangent frame of
/// `center`: w1 e1 + w2 e2 + sqrt(1 - |w|^2) center. For the north pole the
/// frame is the (x1, x2) frame.
SpherePoint chart_point(const SpherePoint& center, std::complex<double> w);

/// f = sum_j gamma_j e_j over the degree-N basis vanishing at the north pole,
/// e_j = L_N^{(j)}(x3) (x1 + i x2)^j and e_{-j} = L_N^{(j)}(x3) (x1 - i x2)^j.
/// Coefficients are held in log form; transplanted expansions have
/// coefficients far outside the double range.
class SphericalHarmonicExpansion {
public:
  explicit SphericalHarmonicExpansion(int N = 1);
  SphericalHarmonicExpansion(int N, std::vector<ScaledComplex> coefficients);

  int degree() const noexcept { return N_; }
  double eigenvalue() const noexcept { return static_cast<double>(N_) * (N_ + 1); }

  /// gamma_j for 1 <= |j| <= N.
  const ScaledComplex& coefficient(int j) const;
  void set_coefficient(int j, ScaledComplex value);
  const std::vector<ScaledComplex>& coefficients() const noexcept { return gamma_; }

  /// Complex value f(p).
  ScaledComplex value(const SpherePoint& p) const;
  /// Upper bound of log max |f| over the sphere (|e_j| <= L_N^{(j)}(1)).
  double log_bound() const;

  /// f o R_phi, R_phi the rotation by phi about the polar axis:
  /// gamma_j -> gamma_j e^{i j phi}.
  SphericalHarmonicExpansion rotated(double phi) const;
  SphericalHarmonicExpansion scaled(double factor) const;

private:
  int N_;
  std::vector<ScaledComplex> gamma_;  // index j + N, j = -N..N; j = 0 unused
};

ScaledComplex eval_basis_scaled(int N, int j, const SpherePoint& p);
/// e_j(p) as a double; overflows for large N.
std::complex<double> eval_basis(int N, int j, const SpherePoint& p);

/// log of the L^2(S^2) norm of e_j.
double log_basis_norm(int N, int j);

/// gamma_j = xi_j / ||e_j|| with xi_j independent standard complex Gaussians
/// (E|xi|^2 = 1), so f is a standard Gaussian vector in the span of the
/// normalised basis.
SphericalHarmonicExpansion random_eigenfunction(int N, std::uint64_t seed);

/// The sectoral harmonic e_N.
SphericalHarmonicExpansion sectoral_harmonic(int N);

struct LatLongSpec {
  int n_theta = 512;
  int n_phi = 1024;
};

/// f on theta_i = (i + 1/2) pi / n_theta, phi_k = 2 pi k / n_phi, stored as
/// f * exp(-log_scale).
struct SphereSamples {
  int n_theta = 0, n_phi = 0;
  double log_scale = 0.0;
  std::vector<std::complex<double>> values;

  const std::complex<double>& at(int i, int k) const { return values[static_cast<std::size_t>(i) * n_phi + k]; }
  SphereGrid real_grid() const;
};

/// Row-wise evaluation: Legendre columns per colatitude, then one inverse FFT
/// in longitude. Needs n_phi > 2N.
SphereSamples sample_sphere(const SphericalHarmonicExpansion& f, const LatLongSpec& spec);

/// max |Delta_s f + N(N+1) f| / max |f| with second-order differences,
/// excluding `pole_rows` rows next to each pole.
double laplace_beltrami_residual(const SphereSamples& s, int N, int pole_rows = 2);
double laplace_beltrami_residual(const SphericalHarmonicExpansion& f, const LatLongSpec& spec,
                                 int pole_rows = 2);

/// Area of {Re f > 0} on the sphere by lat-long cell sums (sin theta weights).
AreaEstimate sphere_positivity_area(const SphereSamples& s, double sign = 1.0);

struct DoublingStatistics {
  std::vector<double> b;  // b(x, lambda) per sample
  double B1 = 0.0;        // mean
  double Binf = 0.0;      // max
  std::vector<int> histogram;
  double hist_lo = 0.0, hist_hi = 0.0;
};

/// b(x, lambda) = beta(D(x, r / sqrt(lambda)), Re f) at uniformly sampled x,
/// in the tangent chart at x with a polar-grid disc maximum.
DoublingStatistics doubling_statistics(const SphericalHarmonicExpansion& f, double r_factor,
                                       int sample_count, std::uint64_t seed,
                                       PolarGridSpec grid = {32, 64}, int bins = 20);

struct LengthVsDoubling {
  double length = 0.0;
  double B1 = 0.0;
  double Binf = 0.0;
  double lambda = 0.0;
  /// B1 / (length / sqrt(lambda)).
  double ratio = 0.0;
};

LengthVsDoubling nodal_length_vs_B1(const SphericalHarmonicExpansion& f, const LatLongSpec& res,
                                    double r_factor, int sample_count, std::uint64_t seed,
                                    PolarGridSpec grid = {32, 64});

}  // namespace nodal
