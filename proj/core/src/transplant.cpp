#include "nodal/transplant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "json.hpp"
#include "nodal/errors.hpp"
#include "nodal/legendre.hpp"
#include "nodal/parallel.hpp"

namespace nodal {
namespace {

using json = nlohmann::json;
constexpr double kPi = std::numbers::pi;

double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return std::max(a, b) + std::log1p(std::exp(-std::abs(a - b)));
}

// 1 - sqrt(1 - s) without cancellation.
double one_minus_sqrt(double s) { return s / (1.0 + std::sqrt(1.0 - s)); }

std::vector<double> radius_samples(const TransplantOptions& opt) {
  std::vector<double> r;
  for (int i = 0; i < opt.log_samples; ++i) {
    r.push_back(std::pow(10.0, -6.0 + 6.0 * i / std::max(opt.log_samples - 1, 1)));
  }
  for (int i = 1; i <= opt.uniform_samples; ++i) r.push_back(static_cast<double>(i) / opt.uniform_samples);
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());
  return r;
}

double parse_number(const json& v) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    return std::stod(s);
  }
  return v.get<double>();
}

json number(double x) {
  if (std::isinf(x)) return x < 0 ? "-inf" : "inf";
  return decimal17(x);
}

}  // namespace

double max_B_over_A(int N, const TransplantOptions& opt) {
  if (N < 1) throw DomainError("max_B_over_A: degree must be at least 1");
  const auto r = radius_samples(opt);
  std::vector<long double> A(N + 1);
  for (int j = 1; j <= N; ++j) A[j] = legendre_derivative_at_one(N, j);
  std::vector<double> best(r.size(), 0.0);
  parallel_for(r.size(), [&](std::size_t k) {
    const long double rr = r[k];
    // x = sqrt(1 - r^2) and x - 1 carried separately to keep B_j accurate for small r.
    const long double x = std::sqrt(1.0L - rr * rr);
    const auto L = legendre_derivatives(N, x);
    double m = 0.0;
    for (int j = 1; j <= N; ++j) m = std::max(m, static_cast<double>(std::fabs((L[j] / A[j] - 1.0L) / rr)));
    best[k] = m;
  });
  return *std::max_element(best.begin(), best.end());
}

SphericalTransplant::SphericalTransplant(std::vector<std::complex<double>> alpha, double kappa,
                                         double log_delta, double log_M, double max_B_over_A)
    : N_(static_cast<int>(alpha.size()) - 1),
      kappa_(kappa),
      log_delta_(log_delta),
      log_M_(log_M),
      max_B_over_A_(max_B_over_A),
      alpha_(std::move(alpha)),
      f_(std::max(N_, 1)) {
  if (N_ < 1) throw DomainError("SphericalTransplant: need degree >= 1");
  for (int j = 1; j <= N_; ++j) {
    const std::complex<double> a = alpha_[j];
    if (a == 0.0) continue;
    const double lm = std::log(std::abs(a)) - log_legendre_derivative_at_one(N_, j) - j * log_delta_;
    f_.set_coefficient(j, ScaledComplex::from_log(lm, std::arg(a)));
  }

  // Enough radial terms that (t lambda / 2)^k / k!^2 falls below 1e-18 at t = t_max.
  const double t_max = one_minus_sqrt(std::exp(2.0 * log_delta_));
  const double lam = lambda();
  std::vector<double> ratio(N_ + 1, 1.0);  // A_{j+k} / A_j / k!
  for (int k = 0; k <= N_; ++k) {
    std::vector<std::complex<double>> c(N_ + 1, 0.0);
    for (int j = 1; j + k <= N_; ++j) c[j] = alpha_[j] * ratio[j];
    radial_.push_back(std::move(c));
    const double log_term = (k + 1) * std::log(std::max(t_max * lam / 2.0, 1e-300)) - 2.0 * std::lgamma(k + 2.0);
    if (log_term < std::log(1e-18)) break;
    for (int j = 1; j + k + 1 <= N_; ++j) {
      const double i = j + k + 1;
      ratio[j] *= (N_ + i) * (N_ - i + 1) / (2.0 * i) / (k + 1.0);
    }
  }
}

std::complex<double> SphericalTransplant::F(std::complex<double> z) const {
  if (std::abs(z) > 1.0 + 1e-12) throw DomainError("SphericalTransplant::F: |z| > 1");
  const double t = one_minus_sqrt(std::exp(2.0 * log_delta_) * std::norm(z));
  std::complex<double> acc = 0.0;
  double tk = 1.0;
  for (const auto& c : radial_) {
    std::complex<double> h = 0.0;
    for (int j = N_; j >= 1; --j) h = (h + c[j]) * z;
    acc += tk * h;
    tk *= -t;
  }
  return acc;
}

ScaledComplex SphericalTransplant::f_chart(std::complex<double> z) const {
  return f_.value(chart_point(SpherePoint::north_pole(), delta() * z));
}

std::complex<double> SphericalTransplant::P(std::complex<double> z) const {
  std::complex<double> h = 0.0;
  for (int j = N_; j >= 1; --j) h = (h + alpha_[j]) * z;
  return h;
}

SphericalTransplant transplant(const ExtremalPolynomial& P, const TransplantOptions& opt) {
  if (P.N < 1 || static_cast<int>(P.alpha.size()) != P.N + 1) {
    throw DomainError("transplant: malformed extremal polynomial");
  }
  double log_sum = -std::numeric_limits<double>::infinity();
  for (int j = 1; j <= P.N; ++j) {
    if (P.alpha[j] != 0.0) log_sum = log_add(log_sum, std::log(std::abs(P.alpha[j])));
  }
  if (std::isinf(log_sum)) throw DegenerateInputError("transplant: P_N is identically zero");
  const double mba = max_B_over_A(P.N, opt);
  const double log_M = std::log(mba) + log_sum;
  const double log_delta = std::log(P.kappa / 2.0) - log_M;
  SphericalTransplant T(P.alpha, P.kappa, log_delta, log_M, mba);
  T.r_N = P.r_N;
  T.c4 = P.c4;
  T.quadrature = P.quadrature;
  T.seed = P.seed;
  return T;
}

TransplantDeviation transplant_deviation(const SphericalTransplant& T, PolarGridSpec grid) {
  TransplantDeviation out;
  out.bound = T.deviation_bound();
  out.kappa = T.kappa();
  std::vector<double> rows(static_cast<std::size_t>(grid.n_radial), 0.0);
  parallel_for(rows.size(), [&](std::size_t i) {
    const double r = static_cast<double>(i + 1) / grid.n_radial;
    double m = 0.0;
    for (int k = 0; k < grid.n_angular; ++k) {
      const auto z = std::polar(r, 2.0 * kPi * k / grid.n_angular);
      m = std::max(m, std::abs(T.F(z) - T.P(z)));
    }
    rows[i] = m;
  });
  out.max_deviation = *std::max_element(rows.begin(), rows.end());
  out.samples = static_cast<std::size_t>(grid.n_radial) * grid.n_angular;
  return out;
}

double transplant_consistency(const SphericalTransplant& T, PolarGridSpec grid) {
  std::vector<double> rows(static_cast<std::size_t>(grid.n_radial), 0.0);
  parallel_for(rows.size(), [&](std::size_t i) {
    const double r = static_cast<double>(i + 1) / grid.n_radial;
    double m = 0.0;
    for (int k = 0; k < grid.n_angular; ++k) {
      const auto z = std::polar(r, 2.0 * kPi * k / grid.n_angular);
      double scale = 0.0;
      for (int j = 1; j <= T.degree(); ++j) scale += std::abs(T.alpha()[j]) * std::pow(r, j);
      m = std::max(m, std::abs(T.f_chart(z).to_complex() - T.F(z)) / std::max(1.0, scale));
    }
    rows[i] = m;
  });
  return *std::max_element(rows.begin(), rows.end());
}

TransplantArea transplant_area(const SphericalTransplant& T, const AreaOptions& opt, double margin) {
  const double d2 = std::exp(2.0 * T.log_delta());
  const double c = one_minus_sqrt(d2);
  const double s = 1.0 / (1.0 + std::sqrt(1.0 - d2));
  // Spherical area fraction inside chart radius delta rho is (1 - sqrt(1 - delta^2 rho^2)) / c;
  // a point at Euclidean radius q stands for the rho with that fraction equal to q^2.
  RealField g = [&](std::complex<double> w) {
    const double q = std::abs(w);
    if (q == 0.0) return T.F(0.0).real() + margin;
    const double rho = q * std::sqrt(s * (2.0 - q * q * c));
    return T.F(w * (std::min(rho, 1.0) / q)).real() + margin;
  };
  TransplantArea out;
  out.margin = margin;
  const AreaEstimate a = positivity_area(g, Disc({0.0, 0.0}, 1.0), opt);
  out.ratio = a;
  out.ratio.value = a.value / kPi;
  out.ratio.abs_error = a.abs_error / kPi;
  out.spherical_disc_area = T.disc().spherical_area();
  out.log_lambda = std::log(T.lambda());
  return out;
}

std::string to_json(const SphericalTransplant& T) {
  json alpha = json::array(), beta = json::array();
  for (const auto& a : T.alpha()) alpha.push_back(json::array({decimal17(a.real()), decimal17(a.imag())}));
  for (int j = 1; j <= T.degree(); ++j) {
    const auto& b = T.expansion().coefficient(j);
    beta.push_back(json::array({number(b.log_magnitude), decimal17(b.phase)}));
  }
  json doc = {
      {"schema", "nodal_lab.spherical_transplant"},
      {"version", 1},
      {"degree", T.degree()},
      {"kappa", decimal17(T.kappa())},
      {"log_delta", decimal17(T.log_delta())},
      {"delta", decimal17(T.delta())},
      {"log_M", decimal17(T.log_M())},
      {"max_B_over_A", decimal17(T.max_B_over_A())},
      {"alpha", alpha},
      {"beta_log_polar", beta},
      {"provenance",
       {{"r_N", decimal17(T.r_N)}, {"c4_measured", decimal17(T.c4)}, {"quadrature", T.quadrature}, {"seed", T.seed}}},
  };
  return doc.dump(2);
}

SphericalTransplant transplant_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw DomainError(std::string("transplant_from_json: ") + e.what());
  }
  if (doc.value("schema", "") != "nodal_lab.spherical_transplant") {
    throw DomainError("transplant_from_json: not a spherical transplant document");
  }
  if (doc.value("version", 0) != 1) throw DomainError("transplant_from_json: unsupported version");
  std::vector<std::complex<double>> alpha;
  for (const auto& c : doc.at("alpha")) alpha.emplace_back(parse_number(c.at(0)), parse_number(c.at(1)));
  if (static_cast<int>(alpha.size()) != doc.at("degree").get<int>() + 1) {
    throw DomainError("transplant_from_json: coefficient count mismatch");
  }
  SphericalTransplant T(std::move(alpha), parse_number(doc.at("kappa")), parse_number(doc.at("log_delta")),
                        parse_number(doc.at("log_M")), parse_number(doc.at("max_B_over_A")));
  const auto& p = doc.at("provenance");
  T.r_N = parse_number(p.at("r_N"));
  T.c4 = parse_number(p.at("c4_measured"));
  T.quadrature = p.at("quadrature").get<std::string>();
  T.seed = p.at("seed").get<std::uint64_t>();
  return T;
}

}  // namespace nodal
