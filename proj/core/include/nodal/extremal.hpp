#pragma once

#include <complex>
#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "nodal/cauchy.hpp"
#include "nodal/entire.hpp"
#include "nodal/metrics.hpp"
#include "nodal/series.hpp"

namespace nodal {

/// How the shift R of G(z) = E(z + R) - E(R) is chosen from the measured c4.
///  Minimal: smallest R with exp(exp(R)) >= 2 c4 + 2, plus `shift_margin`.
///  Linear:  R = 2 c4 + 2.
enum class ShiftRule { Minimal, Linear };

/// How the rescaling radius r_N is chosen.
///  LargestCertified: largest r whose certified truncation bound is <= kappa,
///    found by shrinking from the Cauchy radius of degree N + 1, then bisection.
///  Asymptotic: r = log(N) / (2 c6_eff), shrunk until the bound holds.
enum class RadiusRule { LargestCertified, Asymptotic };

struct ExtremalConfig {
  CutoffSpec cutoff{};
  EntireEOptions quadrature{4.5, 12, 0.6};
  int reference_nodes = 16;  // second rule used to estimate quadrature error
  CauchyOptions cauchy{};
  ShiftRule shift_rule = ShiftRule::Minimal;
  double shift_margin = 0.1;
  RadiusRule radius_rule = RadiusRule::LargestCertified;
  double kappa = 0.25;
  double shrink = 0.9;
  int max_retries = 20;
  int c4_grid = 40;
  int probe_grid = 64;
  std::uint64_t seed = 0;
};

/// P_N(z) = Q_N(r_N z), Q_N the degree-N Taylor polynomial of G.
struct ExtremalPolynomial {
  int N = 0;
  double R = 0.0;
  double c4 = 0.0;
  double c5_eff = 0.0;
  double c6_eff = 0.0;
  double r_N = 0.0;
  double r_N_asymptotic = 0.0;  // log N / (2 c6_eff), for comparison
  double kappa = 0.25;
  double truncation_bound = 0.0;
  int retries = 0;
  std::vector<std::complex<double>> alpha;  // P_N coefficients, alpha[0] = 0
  std::vector<double> log_abs_a;             // log |a_n| of G, n = 0..N
  std::vector<double> arg_a;
  std::vector<double> cauchy_radius;
  double a0_relative = 0.0;      // |a_0| / max_n |a_n| rho_0^n
  double strip_probe_max = 0.0;  // max Re P_N on probes with |Im(r_N z)| >= pi/2
  int strip_probe_count = 0;
  std::string quadrature;
  double quadrature_error = 0.0;
  std::uint64_t seed = 0;

  CoefficientSeries P() const;
  /// Q_N on the disc of radius r_N.
  CoefficientSeries Q() const;
  bool strip_check_passed() const { return strip_probe_max <= -kappa; }
};

/// Solves c5 rho e^rho = n for rho.
double cauchy_radius(double n, double c5);

/// sup_{n_from <= n <= n_to} |a_n|^{1/n} log n.
double c6_effective(const CauchyCoefficients& c, int n_from, int n_to);

/// Holds E, the measured constants and the Taylor data of G, shared by
/// builds for different N. Thread-safe.
class ExtremalBuilder {
public:
  explicit ExtremalBuilder(ExtremalConfig config = {});

  const ExtremalConfig& config() const noexcept { return config_; }
  const EntireE& entire() const noexcept { return E_; }
  const C4Measurement& c4() const noexcept { return c4_; }
  double shift() const noexcept { return R_; }
  double c5_eff() const noexcept { return c5_; }
  double quadrature_error() const noexcept { return quad_error_; }
  std::complex<double> E_at_shift() const noexcept { return E_R_; }

  /// G(z) = E(z + R) - E(R).
  ScaledComplex G(std::complex<double> z) const;
  double radius_for(int n) const { return cauchy_radius(std::max(n, 1), c5_); }

  /// Taylor coefficients a_0..a_{n_max} of G (cached).
  CauchyCoefficients taylor(int n_max);

  ExtremalPolynomial build(int N);

  static constexpr int kMaxDegree = 1024;

private:
  ExtremalConfig config_;
  EntireE E_;
  C4Measurement c4_;
  double R_ = 0.0;
  std::complex<double> E_R_{};
  double c5_ = 0.0;
  double quad_error_ = 0.0;
  std::mutex mutex_;
  std::optional<CauchyCoefficients> taylor_;
};

CauchyCoefficients taylor_coefficients(ExtremalBuilder& builder, int n_max);
ExtremalPolynomial build_extremal(int N, const ExtremalConfig& config = {});

struct ExtremalArea {
  AreaEstimate margin0;       // {Re P_N > 0} in the unit disc
  AreaEstimate margin_kappa;  // {Re P_N > -kappa}
  double ratio0() const;
  double ratio_kappa() const;
};

ExtremalArea extremal_area(const ExtremalPolynomial& P, const AreaOptions& opt);

std::string to_json(const ExtremalPolynomial& P);
ExtremalPolynomial extremal_from_json(const std::string& text);

/// Decimal string with 17 significant digits (round-trips a double).
std::string decimal17(double x);

}  // namespace nodal
