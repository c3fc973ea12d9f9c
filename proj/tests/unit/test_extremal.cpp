#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "nodal/cauchy.hpp"
#include "nodal/errors.hpp"
#include "nodal/extremal.hpp"
#include "nodal/quadrature.hpp"

using namespace nodal;
using std::numbers::pi;
using cd = std::complex<double>;

namespace {

ExtremalBuilder& shared_builder() {
  static ExtremalBuilder b;
  return b;
}

const ExtremalPolynomial& P16() {
  static const ExtremalPolynomial P = shared_builder().build(16);
  return P;
}

// Gauss-Legendre contour integral of E around the rectangle [x0,x1] x [y0,y1].
cd rectangle_integral(const EntireE& E, double x0, double x1, double y0, double y1) {
  const auto q = gauss_legendre(48);
  cd sum = 0.0;
  const cd corners[5] = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}, {x0, y0}};
  for (int s = 0; s < 4; ++s) {
    const cd a = corners[s], b = corners[s + 1];
    for (std::size_t k = 0; k < q.nodes.size(); ++k) {
      const cd z = 0.5 * (a + b) + 0.5 * (b - a) * q.nodes[k];
      sum += q.weights[k] * 0.5 * (b - a) * eval_E(E, z).to_complex();
    }
  }
  return sum;
}

}  // namespace

TEST_CASE("dbar potential") {
  auto& b = shared_builder();
  const auto& E = b.entire();
  CHECK(E.truncation_ratio() < 1e-14);
  CHECK(std::abs(dbar_potential(E, 100.0)) < 0.05 * b.c4().sup_u);

  // Wirtinger derivative of u against exp(exp z) dbar chi, in the transition band
  for (cd z0 : {cd(-0.5, 0.4), cd(1.0, 2.5), cd(-0.3, -3.0)}) {
    const double h = 1e-4;
    const cd ux = (dbar_potential(E, z0 + h) - dbar_potential(E, z0 - h)) / (2 * h);
    const cd uy = (dbar_potential(E, z0 + cd(0, h)) - dbar_potential(E, z0 - cd(0, h))) / (2 * h);
    const cd dbar = 0.5 * (ux + cd(0, 1) * uy);
    const cd expected = E.density(z0);
    CHECK(std::abs(dbar - expected) <= 1e-4 * std::max(std::abs(expected), 1e-3));
  }
}

TEST_CASE("E is bounded off the half strip and entire") {
  auto& b = shared_builder();
  const auto& E = b.entire();
  const double c4 = b.c4().c4;
  CHECK(c4 > 0.0);
  CHECK(std::isfinite(c4));
  CHECK(std::abs(eval_E(E, -2.0).to_complex()) <= c4);
  CHECK(std::abs(eval_E(E, 1.0).to_complex() - std::exp(std::exp(1.0))) <= c4);

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> X(-4.0, 6.0), Y(-5.0, 5.0);
  int outside = 0;
  double worst = 0.0;
  while (outside < 2000) {
    const cd z(X(rng), Y(rng));
    if (in_half_strip(z)) continue;
    ++outside;
    worst = std::max(worst, std::exp(eval_E(E, z).log_magnitude));
  }
  CHECK(worst <= c4);
  // |E - exp exp| <= c4 on the real axis; the log-magnitude is within 1%
  // once exp(exp x) dominates u (|u| is about 0.45 at x = 0)
  for (double x = 0.0; x <= 3.0; x += 0.25) {
    const double ee = std::exp(std::exp(x));
    const cd diff = eval_E(E, x).to_complex() - ee;
    CHECK(std::abs(diff) <= c4);
    if (x >= 1.0) CHECK(std::abs(eval_E(E, x).log_magnitude - std::exp(x)) <= 0.01 * std::exp(x));
  }

  std::uniform_real_distribution<double> C(-3.0, 3.0), W(0.2, 0.8);
  for (int k = 0; k < 3; ++k) {
    const double x0 = C(rng), y0 = C(rng);
    const double x1 = x0 + W(rng), y1 = y0 + W(rng);
    const double scale = std::exp(std::max(eval_E(E, cd(x1, y0)).log_magnitude, eval_E(E, cd(x0, y1)).log_magnitude));
    CHECK(std::abs(rectangle_integral(E, x0, x1, y0, y1)) <= 1e-6 * std::max(1.0, scale));
  }
}

TEST_CASE("Cauchy machinery recovers 1/n!") {
  ScaledField g = [](cd z) { return ScaledComplex::from_log(z.real(), z.imag()); };
  const auto c = cauchy_coefficients(g, 50, [](int n) { return std::max(1.0, static_cast<double>(n)); });
  double lf = 0.0;
  for (int n = 0; n <= 50; ++n) {
    if (n > 0) lf += std::log(static_cast<double>(n));
    CHECK(std::abs(std::exp(c.a[n].log_magnitude + lf) - 1.0) < 1e-10);
  }
}

TEST_CASE("Taylor coefficients of G") {
  auto& b = shared_builder();
  const auto c = taylor_coefficients(b, 128);
  double scale = 0.0;
  for (int n = 1; n <= 128; ++n) scale = std::max(scale, c.a[n].log_magnitude + n * std::log(c.radius[0]));
  CHECK(c.a[0].log_magnitude <= std::log(1e-10) + scale);

  // decay constant stable when the quadrature is refined
  ExtremalConfig fine = b.config();
  fine.quadrature.nodes = 24;
  ExtremalBuilder b2(fine);
  const double c6 = c6_effective(c, 16, 128);
  const double c6_fine = c6_effective(taylor_coefficients(b2, 128), 16, 128);
  CHECK(std::isfinite(c6));
  CHECK(std::abs(c6 - c6_fine) <= 0.05 * c6);

  CHECK_THROWS_AS(b.build(ExtremalBuilder::kMaxDegree + 1), CapabilityError);
}

TEST_CASE("extremal polynomial P_16") {
  const auto& P = P16();
  CHECK(P.N == 16);
  CHECK(P.alpha.size() == 17);
  CHECK(P.alpha[0] == cd(0.0, 0.0));
  CHECK(std::abs(P.alpha[16]) > 0.0);
  CHECK(P.truncation_bound <= P.kappa);
  CHECK(P.R > 0.0);
  CHECK(P.strip_check_passed());
  CHECK(P.P()(0.0) == cd(0.0, 0.0));

  const auto area = extremal_area(P, {});
  CHECK(area.ratio0() <= area.ratio_kappa());
  CHECK(area.ratio_kappa() <= (2.0 / P.r_N) * 1.05);

  // rescaling identity
  const auto Q = P.Q();
  AreaOptions opt;
  const auto big = positivity_area([&](cd z) { return Q(z).real() + P.kappa; }, Disc(0.0, P.r_N), opt);
  CHECK(std::abs(big.value / (P.r_N * P.r_N) - area.margin_kappa.value) <=
        big.abs_error / (P.r_N * P.r_N) + area.margin_kappa.abs_error);

}

TEST_CASE("positivity region of Q_N stays inside the strip") {
  // r_16 < pi/2, so the strip only cuts the disc from N = 64 on
  const auto P = shared_builder().build(64);
  REQUIRE(P.r_N > pi / 2);
  const auto Q = P.Q();
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  int tested = 0, bad = 0;
  for (int i = 0; i < 20000; ++i) {
    const cd z = P.r_N * cd(U(rng), U(rng));
    if (std::abs(z) > P.r_N || std::abs(z.imag()) < pi / 2) continue;
    ++tested;
    bad += Q(z).real() > -P.kappa;
  }
  CHECK(tested > 200);
  CHECK(bad == 0);
}

TEST_CASE("zero count of a truncated Taylor polynomial") {
  const auto& P = P16();
  // companion oracle: Durand-Kerner on P_N / z
  std::vector<cd> c(P.alpha.begin() + 1, P.alpha.end());
  const int n = static_cast<int>(c.size()) - 1;
  std::vector<cd> r(n);
  for (int k = 0; k < n; ++k) r[k] = std::polar(1.3, 2 * pi * k / n + 0.25);
  auto eval = [&](cd z) {
    cd s = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * z + *it;
    return s;
  };
  for (int it = 0; it < 5000; ++it) {
    for (int k = 0; k < n; ++k) {
      cd den = c.back();
      for (int m = 0; m < n; ++m) if (m != k) den *= r[k] - r[m];
      r[k] -= eval(r[k]) / den;
    }
  }
  int inside = 1;  // the root at 0
  for (auto z : r) inside += std::abs(z) < 1.0;
  const auto series = P.P();
  CHECK(zero_count([&](cd z) { return series(z); }, 0.0, 1.0, 16) == inside);
}

TEST_CASE("json round trip") {
  const auto& P = P16();
  const auto Q = extremal_from_json(to_json(P));
  CHECK(Q.N == P.N);
  CHECK(Q.r_N == P.r_N);
  CHECK(Q.c4 == P.c4);
  for (std::size_t j = 0; j < P.alpha.size(); ++j) CHECK(Q.alpha[j] == P.alpha[j]);
  CHECK(std::stod(decimal17(0.1)) == 0.1);
}
