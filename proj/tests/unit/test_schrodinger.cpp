#include <cmath>
#include <numbers>

#include "doctest.h"
#include "nodal/errors.hpp"
#include "nodal/parallel.hpp"
#include "nodal/schrodinger.hpp"

using namespace nodal;
using cd = std::complex<double>;
using std::numbers::pi;

TEST_CASE("Green operator on radial sources") {
  const SolverGrid grid;
  const GreenSolver G(grid);
  auto check_radial = [&](const RealField& g, auto exact) {
    const auto F = G.apply(PolarField::from_function(g, grid));
    double worst = 0.0;
    for (int i = 0; i < grid.n_rho; ++i)
      for (int k = 0; k < grid.n_theta; k += 7) worst = std::max(worst, std::abs(F.at(i, k) - exact(grid.rho(i))));
    return worst;
  };
  CHECK(check_radial([](cd) { return 1.0; }, [](double r) { return (1 - r * r) / 4; }) < 1e-5);
  CHECK(check_radial([](cd) { return 0.0; }, [](double) { return 0.0; }) == 0.0);
  CHECK(check_radial([](cd z) { return std::norm(z); }, [](double r) { return (1 - std::pow(r, 4)) / 16; }) < 1e-5);

  // a non-radial source: g = Re z, F = (rho - rho^3) cos(theta) / 8
  const auto F = G.apply(PolarField::from_function([](cd z) { return z.real(); }, grid));
  CHECK(std::abs(F({0.3, 0.4}) - (0.5 - 0.125) * 0.6 / 8) < 1e-6);
  const auto g = PolarField::from_function([](cd z) { return z.real(); }, grid);
  CHECK(poisson_residual(F, g) < 1e-6);
}

TEST_CASE("positive solution") {
  const auto zero = positive_solution(constant_potential(0.0));
  CHECK(zero.min_phi == doctest::Approx(1.0));
  CHECK(zero.max_phi == doctest::Approx(1.0));

  const double q = 0.05;
  const auto s = positive_solution(constant_potential(q));
  double worst = 0.0;
  for (double r : {0.0, 0.25, 0.6, 0.9, 1.0}) {
    const double phi = s.phi(std::polar(r, 0.3));
    worst = std::max(worst, std::abs(phi - std::cyl_bessel_j(0.0, std::sqrt(q) * r)));
  }
  CHECK(worst < 1e-4);
  CHECK(s.min_phi > 0.0);
  CHECK(s.c0_measured * q < 0.5);

  const auto trig = seeded_trig_potential(0.08, 7);
  CHECK(trig.sup_norm == doctest::Approx(0.08).epsilon(0.02));
  const auto st = positive_solution(trig);
  CHECK(st.residual_norm < 1e-3);
  CHECK(st.min_phi > 0.0);
  for (std::size_t i = 1; i < st.iterate_norms.size(); ++i) CHECK(st.iterate_norms[i] < st.iterate_norms[i - 1]);

  CHECK_THROWS_AS(positive_solution(constant_potential(0.2)), PreconditionError);
}

TEST_CASE("Beltrami coefficient") {
  const auto s0 = positive_solution(constant_potential(0.0));
  const auto F0 = PolarField::from_function([](cd z) { return z.real(); }, s0.phi.grid());
  const auto b0 = beltrami_field(F0, s0.phi);
  CHECK(b0.sup_mu < 1e-12);
  CHECK(b0.K == doctest::Approx(1.0));

  const auto q = constant_potential(0.05);
  const auto s = positive_solution(q);
  const auto F = manufactured_solution(q, s.phi, {0.0, 1.0});
  const auto b = beltrami_field(F, s.phi);
  CHECK(b.sup_mu < 1.0);
  CHECK(b.K - 1.0 > 0.0);
  CHECK(b.modulus_identity_error < 1e-8);
  CHECK(divergence_residual(F, s.phi) < 1e-3);
  CHECK(schrodinger_residual(F, q) < 1e-3);

  const auto flat = PolarField::from_function([](cd) { return 2.0; }, s0.phi.grid());
  CHECK_THROWS_AS(beltrami_field(flat, s0.phi), DegenerateInputError);
}

TEST_CASE("frequency function and log convexity") {
  const RealField p3 = [](cd z) { return std::pow(z, 3).real(); };
  CHECK(frequency_J(p3, 0.0, 1e-6) < 1e-30);
  const auto prof = frequency_profile(p3, 0.0);
  CHECK(std::abs(log_convexity_check(prof)) < 1e-6);
  // J(r) = pi r^{2n+1} B(n+1, 1/2) / 2 for Re z^n, q = 0
  for (double r : {0.1, 0.4, 0.9}) {
    CHECK(frequency_J(p3, 0.0, r) == doctest::Approx(pi * std::pow(r, 7) * std::beta(4.0, 0.5) / 2).epsilon(1e-10));
  }
  const double slope = std::log(prof.J.back() / prof.J.front()) / std::log(prof.radii.back() / prof.radii.front());
  CHECK(slope == doctest::Approx(7.0).epsilon(1e-8));

  const auto mixed = frequency_profile([](cd z) { return (z + z * z * z).real(); }, 0.0);
  CHECK(log_convexity_check(mixed) <= convexity_tolerance(mixed));

  const auto sol = seeded_solution(3, 0.05);
  const auto pf = frequency_profile(sol.F.as_field(), std::sqrt(sol.q.sup_norm));
  CHECK(log_convexity_check(pf) <= convexity_tolerance(pf));
}

TEST_CASE("three circles") {
  const auto zero = constant_potential(0.0);
  const auto t = three_circles_check([](cd z) { return std::pow(z, 4).real(); }, zero, 0.05, 0.1);
  CHECK(t.lhs == doctest::Approx(16.0).epsilon(1e-6));
  CHECK(t.rhs_core == doctest::Approx(4096.0).epsilon(1e-6));
  CHECK(ThreeCirclesFit{1.0, 1.0}.complies(t));
  const auto one = three_circles_check([](cd) { return 1.0; }, zero, 0.05, 0.1);
  CHECK(one.lhs == doctest::Approx(1.0));
  CHECK(one.rhs_core == doctest::Approx(1.0));
}

TEST_CASE("toy ODE convexity") {
  const auto one = SymMatrix::identity(1), none = SymMatrix::identity(1, 0.0);
  CHECK(toy_ode_convexity(one, none, 4.0).max_violation <= 1e-12);

  auto expo = [](double t) { return SymMatrix::identity(1, std::exp(2 * t)); };
  const auto a = toy_ode_convexity(expo, 1, 4.0, 1e-10, 4000);
  const auto b = toy_ode_convexity(expo, 1, 4.0, 1e-10, 8000);
  CHECK(a.max_violation <= 1e-8);
  CHECK(std::abs(a.final_log_norm - b.final_log_norm) < 1e-6);

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto L0 = random_psd(8, 2 * seed), L1 = random_psd(8, 2 * seed + 1);
    CHECK(toy_ode_convexity(L0, L1, 4.0).max_violation <= 1e-7);
  }
}

TEST_CASE("potentials from csv") {
  const auto p = potential_from_csv_text("2,4\n0,0,0,0\n1,1,1,1\n");
  CHECK(p({0.5, 0.0}) == doctest::Approx(0.5));
  CHECK(p.sup_norm == doctest::Approx(1.0));
  CHECK(potential_from_name("constant", 0.03)({0.2, 0.1}) == doctest::Approx(0.03));
}
