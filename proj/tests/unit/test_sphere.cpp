#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "nodal/errors.hpp"
#include "nodal/legendre.hpp"
#include "nodal/sphere.hpp"

using namespace nodal;
using std::numbers::pi;
using cd = std::complex<double>;

namespace {

SphericalHarmonicExpansion single(int N, int j) {
  SphericalHarmonicExpansion f(N);
  f.set_coefficient(j, ScaledComplex::from_complex(1.0));
  return f;
}

}  // namespace

TEST_CASE("basis evaluation") {
  for (int j : {-3, -1, 1, 2, 5}) CHECK(std::abs(eval_basis(5, j, SpherePoint::north_pole())) == 0.0);
  for (double th : {0.0, 0.7, 2.5}) {
    const auto p = SpherePoint::from_angles(pi / 2, th);
    CHECK(std::abs(eval_basis(1, 1, p) - std::polar(1.0, th)) < 1e-14);
    CHECK(std::abs(eval_basis(1, -1, p) - std::polar(1.0, -th)) < 1e-14);
  }
  // sectoral homogeneity: e_8 = L_8^{(8)} (x1 + i x2)^8 with L_8^{(8)} constant
  const double r1 = 0.2, r2 = 0.4;
  const auto p1 = chart_point(SpherePoint::north_pole(), r1), p2 = chart_point(SpherePoint::north_pole(), r2);
  CHECK(std::abs(eval_basis(8, 8, p2)) / std::abs(eval_basis(8, 8, p1)) == doctest::Approx(256.0).epsilon(1e-12));
  CHECK_THROWS_AS(eval_basis(4, 5, p1), DomainError);

  // e_j = L_N^{(j)}(x3) (x1 + i x2)^j, also on the lower hemisphere
  const auto q = SpherePoint::from_vector(0.3, -0.4, -0.6);
  const cd expected = static_cast<double>(legendre_derivative(6, 2, q.z)) * std::pow(cd(q.x, q.y), 2);
  CHECK(std::abs(eval_basis(6, 2, q) - expected) < 1e-12 * std::abs(expected));
}

TEST_CASE("every expansion vanishes at the north pole") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto f = random_eigenfunction(12, seed);
    CHECK(f.value(SpherePoint::north_pole()).is_zero());
    CHECK(f.eigenvalue() == 12.0 * 13.0);
  }
}

TEST_CASE("Laplace-Beltrami residual") {
  CHECK(laplace_beltrami_residual(single(1, 1), {512, 1024}) < 1e-3);
  CHECK(laplace_beltrami_residual(SphericalHarmonicExpansion(4), {64, 128}) == 0.0);

  // second order once a fixed polar cap is excluded; with a fixed row count
  // the m = 1 modes leave a first-order term next to the poles
  for (const auto& f : {single(1, 1), random_eigenfunction(6, 3)}) {
    const double coarse = laplace_beltrami_residual(f, {128, 256}, 8);
    const double fine = laplace_beltrami_residual(f, {256, 512}, 16);
    CHECK(coarse / fine == doctest::Approx(4.0).epsilon(0.3));
  }
}

TEST_CASE("random eigenfunctions") {
  const auto a = random_eigenfunction(10, 42), b = random_eigenfunction(10, 42), c = random_eigenfunction(10, 43);
  bool same = true, differ = false;
  for (int j = -10; j <= 10; ++j) {
    if (j == 0) continue;
    same = same && a.coefficient(j).log_magnitude == b.coefficient(j).log_magnitude &&
           a.coefficient(j).phase == b.coefficient(j).phase;
    differ = differ || a.coefficient(j).log_magnitude != c.coefficient(j).log_magnitude;
  }
  CHECK(same);
  CHECK(differ);

  // gamma_j ||e_j|| are standard complex normal
  double sum = 0.0;
  int count = 0;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const auto f = random_eigenfunction(4, 1000 + s);
    for (int j = -4; j <= 4; ++j) {
      if (j == 0) continue;
      const double m = std::exp(f.coefficient(j).log_magnitude + log_basis_norm(4, std::abs(j)));
      sum += m * m;
      ++count;
    }
  }
  CHECK(sum / count == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("basis norms") {
  // ||e_1||^2 for N = 1 is the integral of sin^2 theta over the sphere
  CHECK(std::exp(2 * log_basis_norm(1, 1)) == doctest::Approx(8 * pi / 3).epsilon(1e-10));
}

TEST_CASE("doubling statistics") {
  const auto f = random_eigenfunction(10, 5);
  const auto s1 = doubling_statistics(f, 1.0, 16, 9);
  const auto s2 = doubling_statistics(f.scaled(10.0), 1.0, 16, 9);
  REQUIRE(s1.b.size() == s2.b.size());
  for (std::size_t i = 0; i < s1.b.size(); ++i) CHECK(s1.b[i] == doctest::Approx(s2.b[i]).epsilon(1e-9));
  CHECK(s1.B1 <= s1.Binf);
  CHECK(s1.B1 > 0.0);
}

TEST_CASE("nodal length and positivity areas") {
  const auto sect = sectoral_harmonic(8);
  const auto lv = nodal_length_vs_B1(sect, {256, 512}, 1.0, 8, 1);
  CHECK(lv.length == doctest::Approx(16 * pi).epsilon(0.02));
  CHECK(lv.B1 > 0.0);
  CHECK(std::isfinite(lv.ratio));

  const auto f = random_eigenfunction(9, 17);
  const auto s = sample_sphere(f, {128, 256});
  const auto pos = sphere_positivity_area(s, 1.0), neg = sphere_positivity_area(s, -1.0);
  CHECK(std::abs(pos.value + neg.value - 4 * pi) <= pos.abs_error + neg.abs_error + 1e-9);

  // rotation about the polar axis
  const auto g = f.rotated(0.37);
  const auto sg = sample_sphere(g, {128, 256});
  const auto pg = sphere_positivity_area(sg, 1.0);
  CHECK(std::abs(pg.value - pos.value) <= pg.abs_error + pos.abs_error);
  const double L = nodal_length(s.real_grid()), Lg = nodal_length(sg.real_grid());
  CHECK(Lg == doctest::Approx(L).epsilon(0.01));
  const auto p = SpherePoint::from_angles(1.1, 0.5);
  const auto prot = SpherePoint::from_angles(1.1, 0.5 + 0.37);
  CHECK(std::abs(g.value(p).to_complex() - f.value(prot).to_complex()) < 1e-9 * std::exp(f.log_bound()));
}

TEST_CASE("geodesic discs") {
  const GeodesicDisc d{SpherePoint::north_pole(), 0.3};
  CHECK(d.spherical_area() == doctest::Approx(2 * pi * (1 - std::sqrt(1 - 0.09))));
  CHECK(d.geodesic_radius() == doctest::Approx(std::asin(0.3)));
  const auto p = SpherePoint::from_vector(1.0, 2.0, 2.0);
  CHECK(std::hypot(p.x, p.y, p.z) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(SpherePoint::from_vector(0, 0, 0), DomainError);
}
