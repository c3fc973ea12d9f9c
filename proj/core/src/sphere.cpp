#include "nodal/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "nodal/errors.hpp"
#include "nodal/fft.hpp"
#include "nodal/legendre.hpp"
#include "nodal/parallel.hpp"

namespace nodal {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Sum of log-form terms, returned in log form.
ScaledComplex sum_terms(const std::vector<ScaledComplex>& terms) {
  double top = kNegInf;
  for (const auto& t : terms) top = std::max(top, t.log_magnitude);
  if (top == kNegInf) return ScaledComplex::zero();
  std::complex<double> acc = 0.0;
  for (const auto& t : terms) acc += t.to_complex_scaled(top);
  return acc == 0.0 ? ScaledComplex::zero()
                    : ScaledComplex::from_log(top + std::log(std::abs(acc)), std::arg(acc));
}

ScaledComplex log_term(const ScaledComplex& gamma, long double L, double j_log_s, double phase) {
  if (gamma.is_zero() || L == 0.0L) return ScaledComplex::zero();
  const double lm = gamma.log_magnitude + static_cast<double>(std::log(std::fabs(L))) + j_log_s;
  return ScaledComplex::from_log(lm, gamma.phase + phase + (L < 0.0L ? kPi : 0.0));
}

}  // namespace

SpherePoint SpherePoint::from_angles(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

SpherePoint SpherePoint::from_vector(double x, double y, double z) {
  const double n = std::sqrt(x * x + y * y + z * z);
  if (!(n > 0.0)) throw DomainError("SpherePoint: zero vector");
  return {x / n, y / n, z / n};
}

double SpherePoint::theta() const { return std::atan2(std::hypot(x, y), z); }
double SpherePoint::phi() const { return std::atan2(y, x); }

double GeodesicDisc::geodesic_radius() const { return std::asin(std::min(chart_radius, 1.0)); }
double GeodesicDisc::spherical_area() const {
  const double r2 = chart_radius * chart_radius;
  // 1 - sqrt(1 - r^2) written without cancellation.
  return 2.0 * kPi * r2 / (1.0 + std::sqrt(1.0 - r2));
}

SpherePoint chart_point(const SpherePoint& c, std::complex<double> w) {
  const double r2 = std::norm(w);
  if (r2 > 1.0) throw DomainError("chart_point: chart radius above 1");
  double e1[3], e2[3];
  const double s = std::hypot(c.x, c.y);
  if (s < 1e-12) {
    const double sg = c.z >= 0.0 ? 1.0 : -1.0;
    e1[0] = 1.0; e1[1] = 0.0; e1[2] = 0.0;
    e2[0] = 0.0; e2[1] = sg; e2[2] = 0.0;
  } else {
    // e1 along increasing longitude, e2 = c x e1 (towards the north pole).
    e1[0] = -c.y / s; e1[1] = c.x / s; e1[2] = 0.0;
    e2[0] = c.y * e1[2] - c.z * e1[1];
    e2[1] = c.z * e1[0] - c.x * e1[2];
    e2[2] = c.x * e1[1] - c.y * e1[0];
  }
  const double h = std::sqrt(1.0 - r2);
  return SpherePoint::from_vector(w.real() * e1[0] + w.imag() * e2[0] + h * c.x,
                                  w.real() * e1[1] + w.imag() * e2[1] + h * c.y,
                                  w.real() * e1[2] + w.imag() * e2[2] + h * c.z);
}

// ---------------------------------------------------------------------------

SphericalHarmonicExpansion::SphericalHarmonicExpansion(int N) : N_(N), gamma_(2 * static_cast<std::size_t>(N) + 1) {
  if (N < 1) throw DomainError("SphericalHarmonicExpansion: degree must be at least 1");
}

SphericalHarmonicExpansion::SphericalHarmonicExpansion(int N, std::vector<ScaledComplex> coefficients)
    : N_(N), gamma_(std::move(coefficients)) {
  if (N < 1) throw DomainError("SphericalHarmonicExpansion: degree must be at least 1");
  if (gamma_.size() != 2 * static_cast<std::size_t>(N) + 1) {
    throw DomainError("SphericalHarmonicExpansion: expected 2N + 1 coefficient slots");
  }
  gamma_[N] = ScaledComplex::zero();
}

const ScaledComplex& SphericalHarmonicExpansion::coefficient(int j) const {
  if (j == 0 || std::abs(j) > N_) throw DomainError("coefficient: need 1 <= |j| <= N");
  return gamma_[j + N_];
}

void SphericalHarmonicExpansion::set_coefficient(int j, ScaledComplex value) {
  if (j == 0 || std::abs(j) > N_) throw DomainError("set_coefficient: need 1 <= |j| <= N");
  gamma_[j + N_] = value;
}

ScaledComplex SphericalHarmonicExpansion::value(const SpherePoint& p) const {
  const auto L = legendre_derivatives(N_, static_cast<long double>(p.z));
  const double s = std::hypot(p.x, p.y);
  const double log_s = std::log(s);
  const double ph = std::atan2(p.y, p.x);
  std::vector<ScaledComplex> terms;
  terms.reserve(2 * static_cast<std::size_t>(N_));
  for (int j = 1; j <= N_; ++j) {
    const double jls = s > 0.0 ? j * log_s : kNegInf;
    if (jls == kNegInf) continue;
    terms.push_back(log_term(gamma_[N_ + j], L[j], jls, j * ph));
    terms.push_back(log_term(gamma_[N_ - j], L[j], jls, -j * ph));
  }
  return sum_terms(terms);
}

double SphericalHarmonicExpansion::log_bound() const {
  double acc = kNegInf;
  for (int j = 1; j <= N_; ++j) {
    const double lA = log_legendre_derivative_at_one(N_, j);
    for (int sgn : {-1, 1}) {
      const auto& g = gamma_[N_ + sgn * j];
      if (g.is_zero()) continue;
      const double t = g.log_magnitude + lA;
      acc = acc == kNegInf ? t : std::max(acc, t) + std::log1p(std::exp(-std::abs(acc - t)));
    }
  }
  return acc;
}

SphericalHarmonicExpansion SphericalHarmonicExpansion::rotated(double phi) const {
  SphericalHarmonicExpansion out = *this;
  for (int j = -N_; j <= N_; ++j) {
    if (j == 0 || out.gamma_[j + N_].is_zero()) continue;
    out.gamma_[j + N_] = ScaledComplex::from_log(gamma_[j + N_].log_magnitude, gamma_[j + N_].phase + j * phi);
  }
  return out;
}

SphericalHarmonicExpansion SphericalHarmonicExpansion::scaled(double factor) const {
  SphericalHarmonicExpansion out = *this;
  const ScaledComplex f = ScaledComplex::from_complex(factor);
  for (auto& g : out.gamma_) g = g * f;
  return out;
}

ScaledComplex eval_basis_scaled(int N, int j, const SpherePoint& p) {
  if (N < 1 || j == 0 || std::abs(j) > N) throw DomainError("eval_basis: need 1 <= |j| <= N");
  const int m = std::abs(j);
  const long double L = legendre_derivative(N, m, static_cast<long double>(p.z));
  const double s = std::hypot(p.x, p.y);
  if (s == 0.0 || L == 0.0L) return ScaledComplex::zero();
  const double ph = (j > 0 ? 1.0 : -1.0) * m * std::atan2(p.y, p.x);
  return log_term(ScaledComplex::from_log(0.0, 0.0), L, m * std::log(s), ph);
}

std::complex<double> eval_basis(int N, int j, const SpherePoint& p) {
  return eval_basis_scaled(N, j, p).to_complex();
}

double log_basis_norm(int N, int j) {
  const int m = std::abs(j);
  if (m > N) throw DomainError("log_basis_norm: |j| > N");
  // ||e_j||^2 = 2 pi * 2/(2N+1) * (N+m)!/(N-m)!
  return 0.5 * (std::log(4.0 * kPi / (2.0 * N + 1.0)) + std::lgamma(N + m + 1.0) - std::lgamma(N - m + 1.0));
}

SphericalHarmonicExpansion random_eigenfunction(int N, std::uint64_t seed) {
  SphericalHarmonicExpansion f(N);
  auto rng = substream(seed, static_cast<std::uint64_t>(N));
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  for (int j = -N; j <= N; ++j) {
    if (j == 0) continue;
    const double re = gauss(rng), im = gauss(rng);
    const ScaledComplex xi = ScaledComplex::from_complex({re, im});
    f.set_coefficient(j, xi.is_zero() ? xi : ScaledComplex::from_log(xi.log_magnitude - log_basis_norm(N, j), xi.phase));
  }
  return f;
}

SphericalHarmonicExpansion sectoral_harmonic(int N) {
  SphericalHarmonicExpansion f(N);
  f.set_coefficient(N, ScaledComplex::from_log(0.0, 0.0));
  return f;
}

// ---------------------------------------------------------------------------

SphereGrid SphereSamples::real_grid() const {
  SphereGrid g;
  g.n_theta = n_theta;
  g.n_phi = n_phi;
  g.values.resize(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) g.values[k] = values[k].real();
  return g;
}

SphereSamples sample_sphere(const SphericalHarmonicExpansion& f, const LatLongSpec& spec) {
  const int N = f.degree();
  if (spec.n_theta < 4 || spec.n_phi <= 2 * N) throw DomainError("sample_sphere: need n_theta >= 4 and n_phi > 2N");
  SphereSamples out;
  out.n_theta = spec.n_theta;
  out.n_phi = spec.n_phi;
  out.values.resize(static_cast<std::size_t>(spec.n_theta) * spec.n_phi);
  std::vector<double> row_scale(static_cast<std::size_t>(spec.n_theta), kNegInf);

  parallel_for(static_cast<std::size_t>(spec.n_theta), [&](std::size_t i) {
    const double theta = (static_cast<double>(i) + 0.5) * kPi / spec.n_theta;
    const auto L = legendre_derivatives(N, static_cast<long double>(std::cos(theta)));
    const double log_s = std::log(std::sin(theta));
    std::vector<ScaledComplex> term(2 * static_cast<std::size_t>(N) + 1);
    double top = kNegInf;
    for (int j = 1; j <= N; ++j) {
      term[N + j] = log_term(f.coefficient(j), L[j], j * log_s, 0.0);
      term[N - j] = log_term(f.coefficient(-j), L[j], j * log_s, 0.0);
      top = std::max({top, term[N + j].log_magnitude, term[N - j].log_magnitude});
    }
    std::vector<std::complex<double>> row(static_cast<std::size_t>(spec.n_phi), 0.0);
    if (top != kNegInf) {
      for (int j = 1; j <= N; ++j) {
        row[j] += term[N + j].to_complex_scaled(top);
        row[spec.n_phi - j] += term[N - j].to_complex_scaled(top);
      }
      fft_inplace(row, false);
    }
    double rmax = 0.0;
    for (const auto& v : row) rmax = std::max(rmax, std::abs(v));
    if (rmax > 0.0) {
      for (auto& v : row) v /= rmax;
      row_scale[i] = top + std::log(rmax);
    }
    std::copy(row.begin(), row.end(), out.values.begin() + static_cast<std::ptrdiff_t>(i * spec.n_phi));
  });

  out.log_scale = *std::max_element(row_scale.begin(), row_scale.end());
  if (out.log_scale == kNegInf) {
    out.log_scale = 0.0;
    return out;
  }
  for (int i = 0; i < spec.n_theta; ++i) {
    const double factor = row_scale[i] == kNegInf ? 0.0 : std::exp(row_scale[i] - out.log_scale);
    for (int k = 0; k < spec.n_phi; ++k) out.values[static_cast<std::size_t>(i) * spec.n_phi + k] *= factor;
  }
  return out;
}

double laplace_beltrami_residual(const SphereSamples& s, int N, int pole_rows) {
  const double h = kPi / s.n_theta, hp = 2.0 * kPi / s.n_phi;
  const double lambda = static_cast<double>(N) * (N + 1);
  double fmax = 0.0;
  for (const auto& v : s.values) fmax = std::max(fmax, std::abs(v));
  if (fmax == 0.0) return 0.0;
  const int first = std::max(pole_rows, 1), last = s.n_theta - 1 - std::max(pole_rows, 1);
  std::vector<double> rows(static_cast<std::size_t>(s.n_theta), 0.0);
  parallel_for(rows.size(), [&](std::size_t iu) {
    const int i = static_cast<int>(iu);
    if (i < first || i > last) return;
    const double th = (i + 0.5) * h;
    const double st = std::sin(th), sp = std::sin(th + 0.5 * h), sm = std::sin(th - 0.5 * h);
    double worst = 0.0;
    for (int k = 0; k < s.n_phi; ++k) {
      const int kp = (k + 1) % s.n_phi, km = (k + s.n_phi - 1) % s.n_phi;
      const std::complex<double> f0 = s.at(i, k);
      const std::complex<double> lap_theta = (sp * (s.at(i + 1, k) - f0) - sm * (f0 - s.at(i - 1, k))) / (st * h * h);
      const std::complex<double> lap_phi = (s.at(i, kp) - 2.0 * f0 + s.at(i, km)) / (st * st * hp * hp);
      worst = std::max(worst, std::abs(lap_theta + lap_phi + lambda * f0));
    }
    rows[iu] = worst;
  });
  return *std::max_element(rows.begin(), rows.end()) / fmax;
}

double laplace_beltrami_residual(const SphericalHarmonicExpansion& f, const LatLongSpec& spec, int pole_rows) {
  return laplace_beltrami_residual(sample_sphere(f, spec), f.degree(), pole_rows);
}

AreaEstimate sphere_positivity_area(const SphereSamples& s, double sign) {
  const double h = kPi / s.n_theta, hp = 2.0 * kPi / s.n_phi;
  AreaEstimate est;
  est.method = AreaMethod::LatLongGrid;
  est.budget = static_cast<std::uint64_t>(s.n_theta) * s.n_phi;
  for (int i = 0; i < s.n_theta; ++i) {
    // Exact band area, so the cell weights sum to 4 pi.
    const double band = (std::cos(i * h) - std::cos((i + 1) * h)) * hp;
    for (int k = 0; k < s.n_phi; ++k) {
      const bool pos = sign * s.at(i, k).real() > 0.0;
      if (pos) est.value += band;
      const bool mixed = pos != (sign * s.at(i, (k + 1) % s.n_phi).real() > 0.0) ||
                         (i + 1 < s.n_theta && pos != (sign * s.at(i + 1, k).real() > 0.0));
      if (mixed) est.abs_error += band;
    }
  }
  est.abs_error *= 0.5;
  return est;
}

// ---------------------------------------------------------------------------

DoublingStatistics doubling_statistics(const SphericalHarmonicExpansion& f, double r_factor,
                                       int sample_count, std::uint64_t seed, PolarGridSpec grid,
                                       int bins) {
  const double rho = r_factor / std::sqrt(f.eigenvalue());
  if (!(rho > 0.0 && rho < 0.5 * kPi)) throw PreconditionError("doubling_statistics: disc radius outside the chart");
  if (sample_count < 1) throw PreconditionError("doubling_statistics: need at least one sample");
  const double chart_r = std::sin(rho);
  const double log_scale = f.log_bound();
  DoublingStatistics out;
  out.b.resize(static_cast<std::size_t>(sample_count));
  parallel_for(out.b.size(), [&](std::size_t s) {
    auto rng = substream(seed, s);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const double z = 2.0 * U(rng) - 1.0, ph = 2.0 * kPi * U(rng);
    const double sz = std::sqrt(std::max(0.0, 1.0 - z * z));
    const SpherePoint x{sz * std::cos(ph), sz * std::sin(ph), z};
    RealField field = [&](std::complex<double> w) {
      return f.value(chart_point(x, w)).to_complex_scaled(log_scale).real();
    };
    DoublingOptions opt;
    opt.boundary_only = false;
    opt.grid = grid;
    out.b[s] = doubling_exponent(field, Disc({0.0, 0.0}, chart_r), opt);
  });
  double sum = 0.0;
  out.Binf = -std::numeric_limits<double>::infinity();
  for (double b : out.b) {
    sum += b;
    out.Binf = std::max(out.Binf, b);
  }
  out.B1 = sum / sample_count;
  out.hist_lo = *std::min_element(out.b.begin(), out.b.end());
  out.hist_hi = out.Binf;
  out.histogram.assign(static_cast<std::size_t>(std::max(bins, 1)), 0);
  const double width = out.hist_hi - out.hist_lo;
  for (double b : out.b) {
    int k = width > 0.0 ? static_cast<int>((b - out.hist_lo) / width * bins) : 0;
    out.histogram[static_cast<std::size_t>(std::clamp(k, 0, bins - 1))] += 1;
  }
  return out;
}

LengthVsDoubling nodal_length_vs_B1(const SphericalHarmonicExpansion& f, const LatLongSpec& res,
                                    double r_factor, int sample_count, std::uint64_t seed,
                                    PolarGridSpec grid) {
  LengthVsDoubling out;
  out.lambda = f.eigenvalue();
  out.length = nodal_length(sample_sphere(f, res).real_grid());
  const DoublingStatistics st = doubling_statistics(f, r_factor, sample_count, seed, grid);
  out.B1 = st.B1;
  out.Binf = st.Binf;
  out.ratio = out.length > 0.0 ? out.B1 / (out.length / std::sqrt(out.lambda)) : 0.0;
  return out;
}

}  // namespace nodal
