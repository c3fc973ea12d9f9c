#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "nodal/errors.hpp"
#include "nodal/metrics.hpp"
#include "nodal/sphere.hpp"

using namespace nodal;
using std::numbers::pi;
using cd = std::complex<double>;

namespace {

RealField re_power(int n) {
  return [n](cd z) { return std::pow(z, n).real(); };
}

// Re sum c_n z^n with seeded complex normal coefficients, c_0 = 0.
std::vector<cd> random_coeffs(int degree, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<cd> c(degree + 1);
  for (int n = 1; n <= degree; ++n) c[n] = {g(rng), g(rng)};
  return c;
}

cd horner(const std::vector<cd>& c, cd z) {
  cd s = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * z + *it;
  return s;
}

// Durand-Kerner roots of a polynomial with coefficients c (c.back() != 0).
std::vector<cd> roots(const std::vector<cd>& c) {
  const int n = static_cast<int>(c.size()) - 1;
  std::vector<cd> r(n);
  for (int k = 0; k < n; ++k) r[k] = std::polar(1.1, 2 * pi * k / n + 0.4);
  for (int it = 0; it < 2000; ++it) {
    for (int k = 0; k < n; ++k) {
      cd den = c.back();
      for (int m = 0; m < n; ++m) if (m != k) den *= r[k] - r[m];
      r[k] -= horner(c, r[k]) / den;
    }
  }
  return r;
}

}  // namespace

TEST_CASE("sign changes on circles") {
  CHECK(sign_changes_on_circle(re_power(3), 0.0, 1.0, 3) == 6);
  CHECK(sign_changes_on_circle(re_power(1), 0.0, 0.5, 1) == 2);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto c = random_coeffs(12, seed);
    RealField f = [&](cd z) { return horner(c, z).real(); };
    const int nu = sign_changes_on_circle(f, 0.0, 1.0, 12);
    CHECK(nu % 2 == 0);
    CHECK(nu == dense_scan_sign_changes(f, 0.0, 1.0, 1000000));
  }
}

TEST_CASE("maxima on circles") {
  CHECK(max_on_circle(re_power(4), 0.0, 0.7, 4) == doctest::Approx(std::pow(0.7, 4)).epsilon(1e-9));
  CHECK(max_on_circle([](cd) { return 1.0; }, 0.0, 1.0) == doctest::Approx(1.0));
  CHECK(max_on_circle([](cd z) { return (z + z * z).real(); }, 0.0, 1.0, 2) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("doubling exponents") {
  const Disc unit(0.0, 1.0);
  for (int n : {1, 3, 7}) CHECK(doubling_exponent(re_power(n), unit) == doctest::Approx(n * std::log(2.0)).epsilon(1e-8));
  CHECK(doubling_exponent([](cd) { return 1.0; }, unit) == doctest::Approx(0.0));
  CHECK(doubling_exponent([](cd z) { return (z + z * z).real(); }, unit) ==
        doctest::Approx(std::log(8.0 / 3.0)).epsilon(1e-8));
  CHECK_THROWS_AS(doubling_exponent([](cd) { return 0.0; }, unit), DegenerateInputError);
  CHECK(doubling_sup(re_power(5), {0.0, {0.1, 0.1}}, {1.0, 0.5}) >= 5 * std::log(2.0) - 1e-9);
}

TEST_CASE("argument oscillation") {
  for (int n : {1, 2, 5}) {
    CHECK(arg_oscillation([n](cd z) { return std::pow(z, n); }, 0.0, 1.0, n) == doctest::Approx(2 * pi * n).epsilon(1e-9));
  }
  CHECK(arg_oscillation([](cd z) { return z * z; }, 0.0, 0.3, 2) == doctest::Approx(4 * pi).epsilon(1e-9));
  CHECK(arg_oscillation([](cd z) { return z + 2.0; }, 0.0, 1.0, 1) == doctest::Approx(pi / 3).epsilon(1e-6));
  CHECK_THROWS_AS(arg_profile([](cd z) { return z - 1.0; }, 0.0, 1.0, 1), PreconditionError);

  // z^n g with g zero-free on the closed disc
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-0.3, 0.3);
  for (int n : {1, 3, 6}) {
    const cd a(U(rng), U(rng)), b(U(rng), U(rng));
    AnalyticField f = [=](cd z) { return std::pow(z, n) * std::exp(a * z + b * z * z) * (2.0 + 0.5 * z); };
    CHECK(arg_oscillation(f, 0.0, 1.0, n + 2) >= 2 * pi * n - 1e-9);
    CHECK(zero_count(f, 0.0, 1.0, n + 2) == n);
  }
}

TEST_CASE("zero counts") {
  CHECK(zero_count([](cd z) { return std::pow(z, 5); }, 0.0, 1.0, 5) == 5);
  CHECK(zero_count([](cd z) { return (z - 0.3) * (z - 0.9) * (z + 2.0); }, 0.0, 1.0, 3) == 2);
  for (std::uint64_t seed = 20; seed < 24; ++seed) {
    auto c = random_coeffs(10, seed);
    c[0] = {0.4, -0.2};
    int inside = 0;
    for (auto r : roots(c)) inside += std::abs(r) < 1.0;
    CHECK(zero_count([&](cd z) { return horner(c, z); }, 0.0, 1.0, 10) == inside);
  }
}

TEST_CASE("positivity areas") {
  const Disc unit(0.0, 1.0);
  CHECK(positivity_area(re_power(1), unit).value == doctest::Approx(pi / 2).epsilon(1e-3));
  CHECK(positivity_area(re_power(2), unit).value == doctest::Approx(pi / 2).epsilon(1e-3));

  const auto c = random_coeffs(32, 5);
  RealField f = [&](cd z) { return horner(c, z).real(); };
  RealField g = [&](cd z) { return -horner(c, z).real(); };
  const auto grid = positivity_area(f, unit);
  AreaOptions mc;
  mc.method = AreaMethod::MonteCarlo;
  mc.budget = 400000;
  mc.seed = 99;
  CHECK(agree_within_bars(grid, positivity_area(f, unit, mc)));
  const auto neg = positivity_area(g, unit);
  CHECK(std::abs(grid.value + neg.value - pi) <= grid.abs_error + neg.abs_error);
  CHECK(grid.abs_error > 0.0);
}

TEST_CASE("nodal lengths") {
  const Disc unit(0.0, 1.0);
  CHECK(nodal_length(sample_planar(re_power(1), unit, 401), &unit) == doctest::Approx(2.0).epsilon(0.01));
  CHECK(nodal_length(sample_planar(re_power(2), unit, 401), &unit) == doctest::Approx(4.0).epsilon(0.01));

  const auto s = sample_sphere(sectoral_harmonic(8), {256, 512});
  CHECK(nodal_length(s.real_grid()) == doctest::Approx(16 * pi).epsilon(0.02));
}

TEST_CASE("nodal intersections") {
  CHECK(nodal_intersections([](cd) { return 1.0; }, 0.0, 0.5) == 0);
  CHECK(nodal_intersections(re_power(1), 0.0, 0.7, 1) == 2);
  // sectoral e_N restricted to a tangent chart at an equatorial point
  const int N = 10;
  const auto f = sectoral_harmonic(N);
  const auto x = SpherePoint::from_angles(pi / 2, 0.3);
  RealField local = [&](cd w) { return f.value(chart_point(x, w)).to_complex().real(); };
  const int n = nodal_intersections(local, 0.0, 0.3, N);
  CHECK(n > 0);
  CHECK(n % 2 == 0);
  CHECK(n == dense_scan_sign_changes(local, 0.0, 0.3, 200000));
}
