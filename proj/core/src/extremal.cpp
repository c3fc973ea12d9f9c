#include "nodal/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "json.hpp"

#include "nodal/errors.hpp"
#include "nodal/parallel.hpp"

namespace nodal {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b), lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

double log_max_on_circle(const ExtremalBuilder& b, double rho, int samples) {
  std::vector<double> lm(static_cast<std::size_t>(samples));
  parallel_for(lm.size(), [&](std::size_t k) {
    lm[k] = b.G(std::polar(rho, 2.0 * std::numbers::pi * static_cast<double>(k) / samples)).log_magnitude;
  });
  return *std::max_element(lm.begin(), lm.end());
}

}  // namespace

std::string decimal17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double cauchy_radius(double n, double c5) {
  if (!(n > 0.0) || !(c5 > 0.0)) throw DomainError("cauchy_radius: need n > 0 and c5 > 0");
  // Newton on h(rho) = log rho + rho - log(n / c5).
  const double target = std::log(n / c5);
  double rho = std::max(0.1, target > 1.0 ? target - std::log(target) : std::exp(target) / (1.0 + std::exp(target)));
  for (int it = 0; it < 100; ++it) {
    const double h = std::log(rho) + rho - target;
    const double step = h / (1.0 / rho + 1.0);
    rho = std::max(rho - step, 0.5 * rho);
    if (std::abs(step) < 1e-15 * rho) break;
  }
  return rho;
}

double c6_effective(const CauchyCoefficients& c, int n_from, int n_to) {
  double best = 0.0;
  for (int n = std::max(n_from, 2); n <= std::min(n_to, c.n_max()); ++n) {
    if (c.a[n].is_zero()) continue;
    best = std::max(best, std::exp(c.a[n].log_magnitude / n) * std::log(static_cast<double>(n)));
  }
  return best;
}

CoefficientSeries ExtremalPolynomial::P() const { return CoefficientSeries(alpha, 1.0); }

CoefficientSeries ExtremalPolynomial::Q() const {
  std::vector<std::complex<double>> q(alpha.size());
  for (std::size_t n = 1; n < alpha.size(); ++n) {
    q[n] = std::polar(std::exp(log_abs_a[n]), arg_a[n]);
  }
  return CoefficientSeries(std::move(q), r_N);
}

ExtremalBuilder::ExtremalBuilder(ExtremalConfig config)
    : config_(config), E_(config.cutoff, config.quadrature) {
  if (!(config_.kappa > 0.0 && config_.kappa <= 0.5)) throw DomainError("ExtremalBuilder: kappa must lie in (0, 1/2]");
  c4_ = measure_c4(E_, config_.c4_grid);
  if (config_.shift_rule == ShiftRule::Linear) {
    R_ = 2.0 * c4_.c4 + 2.0;
  } else {
    // Re G <= c4 - (exp(exp R) - c4) <= -2 outside the strip |Im z| <= pi/2.
    R_ = std::max(std::log(std::log(2.0 * c4_.c4 + 2.0)), 0.0) + config_.shift_margin;
  }
  E_R_ = E_(R_).to_complex();

  EntireEOptions ref = config_.quadrature;
  ref.nodes = config_.reference_nodes;
  const EntireE E_ref(config_.cutoff, ref);
  std::vector<std::complex<double>> probes;
  for (int k = 0; k < 24; ++k) probes.push_back(R_ + std::polar(3.0, 2.0 * std::numbers::pi * k / 24.0));
  for (auto z : {std::complex<double>(-0.5, 3.0), {-0.25, 0.0}, {1.0, 2.5}, {3.0, -2.2}, {0.0, 2.0944}}) probes.push_back(z);
  std::vector<double> diff(probes.size());
  parallel_for(probes.size(), [&](std::size_t k) { diff[k] = std::abs(E_.u(probes[k]) - E_ref.u(probes[k])); });
  quad_error_ = std::max(*std::max_element(diff.begin(), diff.end()), 1e-16);

  // c5: growth log M(rho) <= c5 e^rho of G on circles.
  for (double rho = 1.0; rho <= 4.0 + 1e-12; rho += 0.5) {
    c5_ = std::max(c5_, log_max_on_circle(*this, rho, 512) / std::exp(rho));
  }
  if (!(c5_ > 0.0)) throw ConstructionError("ExtremalBuilder: could not calibrate c5");
}

ScaledComplex ExtremalBuilder::G(std::complex<double> z) const {
  return E_(z + R_) - ScaledComplex::from_complex(E_R_);
}

CauchyCoefficients ExtremalBuilder::taylor(int n_max) {
  if (n_max > kMaxDegree) {
    throw CapabilityError("Taylor degree " + std::to_string(n_max) + " exceeds the supported range", kMaxDegree);
  }
  std::lock_guard lock(mutex_);
  if (!taylor_ || taylor_->n_max() < n_max) {
    CauchyOptions opt = config_.cauchy;
    opt.absolute_noise = std::max(opt.absolute_noise, quad_error_);
    taylor_ = cauchy_coefficients([this](std::complex<double> z) { return G(z); }, n_max,
                                  [this](int n) { return radius_for(n); }, opt);
  }
  CauchyCoefficients out = *taylor_;
  out.a.resize(n_max + 1);
  out.radius.resize(n_max + 1);
  out.log_noise.resize(n_max + 1);
  out.log_circle_max.resize(n_max + 1);
  return out;
}

ExtremalPolynomial ExtremalBuilder::build(int N) {
  if (N < 16) throw PreconditionError("build_extremal: N must be at least 16");
  if (N > kMaxDegree) {
    throw CapabilityError("build_extremal: N = " + std::to_string(N) + " exceeds the overflow-safe degree", kMaxDegree);
  }
  const int n_comp = std::min(kMaxDegree, N + std::max(64, N / 2));
  const CauchyCoefficients tc = taylor(n_comp);
  const double ninf = -std::numeric_limits<double>::infinity();

  auto log_bound = [&](double r) {
    const double lr = std::log(r);
    double tail = ninf, noise = ninf, mass = ninf;
    for (int n = 1; n <= n_comp; ++n) {
      const double la = tc.a[n].is_zero() ? ninf : tc.a[n].log_magnitude + n * lr;
      const double ln = tc.log_noise[n] + n * lr;
      if (n > N) {
        tail = log_add(tail, la);
        tail = log_add(tail, ln);
      } else {
        noise = log_add(noise, ln);
        mass = log_add(mass, la);
      }
    }
    // Cauchy estimate |a_n| <= exp(c5 e^rho_n - n log rho_n) beyond the computed range.
    double prev = std::numeric_limits<double>::infinity();
    for (int n = n_comp + 1; n < 1000000; ++n) {
      const double rho = radius_for(n);
      const double lt = c5_ * std::exp(rho) - n * std::log(rho) + n * lr;
      tail = log_add(tail, lt);
      if (lt < -100.0 && lt < prev) break;
      prev = lt;
    }
    return log_add(log_add(tail, noise), std::log(4.0 * kEps) + mass);
  };

  ExtremalPolynomial P;
  P.N = N;
  P.R = R_;
  P.c4 = c4_.c4;
  P.c5_eff = c5_;
  P.c6_eff = c6_effective(tc, 16, n_comp);
  P.r_N_asymptotic = 0.5 * std::log(static_cast<double>(N)) / P.c6_eff;
  P.kappa = config_.kappa;
  P.quadrature = E_.describe();
  P.quadrature_error = quad_error_;
  P.seed = config_.seed;

  const double log_kappa = std::log(config_.kappa);
  double r = config_.radius_rule == RadiusRule::LargestCertified ? radius_for(N + 1) : P.r_N_asymptotic;
  int retries = 0;
  while (log_bound(r) > log_kappa) {
    if (++retries > config_.max_retries) {
      throw ConstructionError("build_extremal: truncation bound above kappa after " +
                              std::to_string(config_.max_retries) + " radius reductions (N = " +
                              std::to_string(N) + ")");
    }
    r *= config_.shrink;
  }
  if (config_.radius_rule == RadiusRule::LargestCertified && retries > 0) {
    double lo = r, hi = r / config_.shrink;
    for (int it = 0; it < 30; ++it) {
      const double mid = std::sqrt(lo * hi);
      (log_bound(mid) <= log_kappa ? lo : hi) = mid;
    }
    r = lo;
  }
  P.r_N = r;
  P.retries = retries;
  P.truncation_bound = std::exp(log_bound(r));

  P.alpha.assign(N + 1, 0.0);
  P.log_abs_a.assign(N + 1, ninf);
  P.arg_a.assign(N + 1, 0.0);
  P.cauchy_radius.assign(tc.radius.begin(), tc.radius.begin() + N + 1);
  for (int n = 1; n <= N; ++n) {
    if (tc.a[n].is_zero()) continue;
    P.log_abs_a[n] = tc.a[n].log_magnitude;
    P.arg_a[n] = tc.a[n].phase;
    P.alpha[n] = std::polar(std::exp(tc.a[n].log_magnitude + n * std::log(r)), tc.a[n].phase);
  }
  P.log_abs_a[0] = tc.a[0].log_magnitude;
  {
    double scale = ninf;
    const double lr0 = std::log(tc.radius[0]);
    for (int n = 1; n <= n_comp; ++n) {
      if (!tc.a[n].is_zero()) scale = std::max(scale, tc.a[n].log_magnitude + n * lr0);
    }
    P.a0_relative = tc.a[0].is_zero() ? 0.0 : std::exp(tc.a[0].log_magnitude - scale);
  }

  // Re Q_N <= -kappa on {|z| <= r_N, |Im z| >= pi/2}, probed in P coordinates.
  const CoefficientSeries series = P.P();
  const int g = config_.probe_grid;
  std::vector<double> row_max(static_cast<std::size_t>(g), -std::numeric_limits<double>::infinity());
  std::vector<int> row_count(static_cast<std::size_t>(g), 0);
  parallel_for(row_max.size(), [&](std::size_t j) {
    const double y = -1.0 + 2.0 * (static_cast<double>(j) + 0.5) / g;
    if (std::abs(y * r) < 0.5 * std::numbers::pi) return;
    for (int i = 0; i < g; ++i) {
      const std::complex<double> z(-1.0 + 2.0 * (i + 0.5) / g, y);
      if (std::abs(z) > 1.0) continue;
      row_max[j] = std::max(row_max[j], series.real_part(z));
      ++row_count[j];
    }
  });
  P.strip_probe_max = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < row_max.size(); ++j) {
    P.strip_probe_max = std::max(P.strip_probe_max, row_max[j]);
    P.strip_probe_count += row_count[j];
  }
  return P;
}

CauchyCoefficients taylor_coefficients(ExtremalBuilder& builder, int n_max) { return builder.taylor(n_max); }

ExtremalPolynomial build_extremal(int N, const ExtremalConfig& config) {
  ExtremalBuilder b(config);
  return b.build(N);
}

double ExtremalArea::ratio0() const { return margin0.value / std::numbers::pi; }
double ExtremalArea::ratio_kappa() const { return margin_kappa.value / std::numbers::pi; }

ExtremalArea extremal_area(const ExtremalPolynomial& P, const AreaOptions& opt) {
  const CoefficientSeries s = P.P();
  const Disc unit({0.0, 0.0}, 1.0);
  ExtremalArea out;
  out.margin0 = positivity_area([&](std::complex<double> z) { return s.real_part(z); }, unit, opt);
  out.margin_kappa = positivity_area([&](std::complex<double> z) { return s.real_part(z) + P.kappa; }, unit, opt);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

using nlohmann::json;

double parse_number(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    return std::stod(s);
  }
  return j.get<double>();
}

json number(double x) {
  if (std::isinf(x)) return x < 0 ? "-inf" : "inf";
  return decimal17(x);
}

json number_array(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

std::vector<double> parse_array(const json& a) {
  std::vector<double> v;
  for (const auto& x : a) v.push_back(parse_number(x));
  return v;
}

}  // namespace

std::string to_json(const ExtremalPolynomial& P) {
  json coeffs = json::array();
  for (const auto& a : P.alpha) coeffs.push_back(json::array({decimal17(a.real()), decimal17(a.imag())}));
  json doc = {
      {"schema", "nodal_lab.extremal_polynomial"},
      {"version", 1},
      {"degree", P.N},
      {"coefficients", coeffs},
      {"r_N", number(P.r_N)},
      {"kappa", number(P.kappa)},
      {"truncation_bound", number(P.truncation_bound)},
      {"provenance",
       {{"R", number(P.R)},
        {"c4_measured", number(P.c4)},
        {"c5_eff", number(P.c5_eff)},
        {"c6_eff", number(P.c6_eff)},
        {"r_N_asymptotic", number(P.r_N_asymptotic)},
        {"retries", P.retries},
        {"a0_relative", number(P.a0_relative)},
        {"strip_probe_max", number(P.strip_probe_max)},
        {"strip_probe_count", P.strip_probe_count},
        {"quadrature", P.quadrature},
        {"quadrature_error", number(P.quadrature_error)},
        {"seed", P.seed},
        {"log_abs_a", number_array(P.log_abs_a)},
        {"arg_a", number_array(P.arg_a)},
        {"cauchy_radius", number_array(P.cauchy_radius)}}},
  };
  return doc.dump(1);
}

ExtremalPolynomial extremal_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw DomainError(std::string("extremal_from_json: ") + e.what());
  }
  if (doc.value("schema", "") != "nodal_lab.extremal_polynomial") {
    throw DomainError("extremal_from_json: not an extremal polynomial document");
  }
  if (doc.value("version", 0) != 1) throw DomainError("extremal_from_json: unsupported version");
  ExtremalPolynomial P;
  P.N = doc.at("degree").get<int>();
  for (const auto& c : doc.at("coefficients")) P.alpha.emplace_back(parse_number(c.at(0)), parse_number(c.at(1)));
  if (static_cast<int>(P.alpha.size()) != P.N + 1) throw DomainError("extremal_from_json: coefficient count mismatch");
  P.r_N = parse_number(doc.at("r_N"));
  P.kappa = parse_number(doc.at("kappa"));
  P.truncation_bound = parse_number(doc.at("truncation_bound"));
  const json& pv = doc.at("provenance");
  P.R = parse_number(pv.at("R"));
  P.c4 = parse_number(pv.at("c4_measured"));
  P.c5_eff = parse_number(pv.at("c5_eff"));
  P.c6_eff = parse_number(pv.at("c6_eff"));
  P.r_N_asymptotic = parse_number(pv.at("r_N_asymptotic"));
  P.retries = pv.at("retries").get<int>();
  P.a0_relative = parse_number(pv.at("a0_relative"));
  P.strip_probe_max = parse_number(pv.at("strip_probe_max"));
  P.strip_probe_count = pv.at("strip_probe_count").get<int>();
  P.quadrature = pv.at("quadrature").get<std::string>();
  P.quadrature_error = parse_number(pv.at("quadrature_error"));
  P.seed = pv.at("seed").get<std::uint64_t>();
  P.log_abs_a = parse_array(pv.at("log_abs_a"));
  P.arg_a = parse_array(pv.at("arg_a"));
  P.cauchy_radius = parse_array(pv.at("cauchy_radius"));
  return P;
}

}  // namespace nodal
