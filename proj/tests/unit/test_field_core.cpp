#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "nodal/cutoff.hpp"
#include "nodal/errors.hpp"
#include "nodal/fft.hpp"
#include "nodal/legendre.hpp"
#include "nodal/scaled_complex.hpp"
#include "nodal/series.hpp"

using namespace nodal;
using std::numbers::pi;

TEST_CASE("eval_series on small series") {
  CoefficientSeries id({0.0, 1.0}, 1.0);
  CHECK(eval_series(id, 0.5) == cplx(0.5, 0.0));
  CHECK(eval_series(CoefficientSeries::zero(2.0), {1.3, -0.4}) == cplx(0.0, 0.0));

  std::vector<cplx> a(31);
  double fact = 1.0;
  for (int n = 0; n <= 30; ++n) {
    if (n > 0) fact *= n;
    a[n] = 1.0 / fact;
  }
  CoefficientSeries ez(a, 2.0);
  CHECK(std::abs(eval_series(ez, 1.0) - std::numbers::e) < 1e-12);
  CHECK(eval_series(ez, 0.0) == a[0]);
  CHECK_THROWS_AS(eval_series(ez, 2.5), DomainError);
}

TEST_CASE("double exponential in log form") {
  auto v = double_exponential(0.0);
  CHECK(v.log_magnitude == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(v.phase == doctest::Approx(0.0));

  v = double_exponential({0.0, pi});
  CHECK(std::abs(v.to_complex() - std::exp(-1.0)) < 1e-15);

  v = double_exponential({2.0, 2.0 * pi / 3.0});
  CHECK(v.log_magnitude == doctest::Approx(-std::exp(2.0) / 2.0).epsilon(1e-13));

  // far outside the double range, still finite in log form
  v = double_exponential({8.0, 0.1});
  CHECK(std::isfinite(v.log_magnitude));
  CHECK(v.log_magnitude == doctest::Approx(std::exp(8.0) * std::cos(0.1)));
}

TEST_CASE("ScaledComplex arithmetic against native complex") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-3.0, 3.0);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const cplx a(U(rng), U(rng)), b(U(rng), U(rng));
    const auto A = ScaledComplex::from_complex(a), B = ScaledComplex::from_complex(b);
    worst = std::max(worst, std::abs((A * B).to_complex() - a * b) / std::abs(a * b));
    worst = std::max(worst, std::abs((A / B).to_complex() - a / b) / std::abs(a / b));
  }
  CHECK(worst < 1e-12);
  const auto s = ScaledComplex::from_complex({1.0, 2.0}) + ScaledComplex::from_complex({-0.5, 0.25});
  CHECK(std::abs(s.to_complex() - cplx(0.5, 2.25)) < 1e-14);
  CHECK(std::abs((ScaledComplex::zero() + ScaledComplex::from_complex(3.0)).to_complex() - 3.0) < 1e-15);
  CHECK(wrap_phase(3.0 * pi) == doctest::Approx(pi));
}

TEST_CASE("Legendre derivatives") {
  for (double x : {-1.0, -0.3, 0.0, 0.7, 1.0}) {
    CHECK(legendre_derivative(1, 1, x) == doctest::Approx(1.0));
    CHECK(legendre_derivative(1, 0, x) == doctest::Approx(x));
  }
  CHECK(legendre_derivative(2, 1, 1.0L) == doctest::Approx(3.0));
  CHECK(legendre_derivative(5, 3, 1.0L) == doctest::Approx(420.0));
  CHECK(legendre_derivative_at_one(5, 3) == doctest::Approx(420.0));
  CHECK(legendre_derivative(4, 5, 0.2L) == 0.0L);
  CHECK_THROWS_AS(legendre_derivative(-1, 0, 0.0L), DomainError);

  // closed form at 1 against the recurrence
  for (int N : {8, 64, 256}) {
    const auto d = legendre_derivatives(N, 1.0L);
    for (int j = 0; j <= N; j += 7) {
      const long double exact = legendre_derivative_at_one(N, j);
      CHECK(static_cast<double>(std::fabs(d[j] / exact - 1.0L)) < 1e-10);
    }
  }
}

TEST_CASE("differentiated three-term recurrence") {
  // (N+1) L_{N+1}^{(j)} = (2N+1) (x L_N^{(j)} + j L_N^{(j-1)}) - N L_{N-1}^{(j)}
  double worst = 0.0;
  for (int N = 1; N <= 63; ++N) {
    for (int j = 1; j <= 8; ++j) {
      for (int k = 0; k < 100; ++k) {
        const long double x = -1.0L + 2.0L * k / 99.0L;
        const long double lhs = (N + 1) * legendre_derivative(N + 1, j, x);
        const long double rhs = (2 * N + 1) * (x * legendre_derivative(N, j, x) + j * legendre_derivative(N, j - 1, x)) -
                                N * legendre_derivative(N - 1, j, x);
        const long double scale = std::max(1.0L, legendre_derivative_at_one(N + 1, j) * (N + 1));
        worst = std::max(worst, static_cast<double>(std::fabs(lhs - rhs) / scale));
      }
    }
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("LegendreTable matches pointwise evaluation") {
  LegendreTable t(12, {-0.5L, 0.25L, 1.0L});
  for (std::size_t k = 0; k < 3; ++k) {
    for (int j = 0; j <= 12; ++j) {
      const long double ref = legendre_derivative(12, j, t.abscissae()[k]);
      CHECK(static_cast<double>(t.value(j, k)) == doctest::Approx(static_cast<double>(ref)).epsilon(1e-12));
    }
  }
}

TEST_CASE("cut-off values and dbar") {
  const CutoffSpec spec;
  auto v = cutoff_chi(spec, 5.0);
  CHECK(v.chi == 1.0);
  CHECK(v.dbar_chi == cplx(0.0, 0.0));
  v = cutoff_chi(spec, -3.0);
  CHECK(v.chi == 0.0);
  CHECK(v.dbar_chi == cplx(0.0, 0.0));

  const cplx z0(-0.5, pi);
  const double h = 1e-5;
  auto chi = [&](cplx z) { return cutoff_chi(spec, z).chi; };
  const double cx = (chi(z0 + h) - chi(z0 - h)) / (2 * h);
  const double cy = (chi(z0 + cplx(0, h)) - chi(z0 - cplx(0, h))) / (2 * h);
  CHECK(std::abs(cutoff_chi(spec, z0).dbar_chi - 0.5 * cplx(cx, cy)) < 1e-6);

  // exact zeros away from the transition layer, bound respected inside it
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> X(-3.0, 4.0), Y(-6.0, 6.0);
  for (int i = 0; i < 5000; ++i) {
    const cplx z(X(rng), Y(rng));
    const auto c = cutoff_chi(spec, z);
    CHECK(c.chi >= 0.0);
    CHECK(c.chi <= 1.0);
    CHECK(std::abs(c.dbar_chi) <= spec.dbar_bound() + 1e-12);
    if (!spec.in_transition(z)) CHECK(c.dbar_chi == cplx(0.0, 0.0));
  }
  CHECK(smoothstep5(-1.0) == 0.0);
  CHECK(smoothstep5(2.0) == 1.0);
  CHECK(smoothstep5(0.5) == doctest::Approx(0.5));
}

TEST_CASE("fft round trip") {
  std::vector<std::complex<double>> d(64);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = {std::sin(0.3 * i), std::cos(1.7 * i)};
  auto e = d;
  fft_inplace(e, true);
  fft_inplace(e, false);
  double worst = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) worst = std::max(worst, std::abs(e[i] / 64.0 - d[i]));
  CHECK(worst < 1e-12);

  std::vector<std::complex<double>> one(16, 1.0);
  fft_inplace(one, true);
  CHECK(std::abs(one[0] - 16.0) < 1e-12);
  CHECK(std::abs(one[3]) < 1e-12);
}
