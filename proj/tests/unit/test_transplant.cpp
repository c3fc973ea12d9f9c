#include <cmath>
#include <numbers>

#include "doctest.h"
#include "nodal/extremal.hpp"
#include "nodal/legendre.hpp"
#include "nodal/transplant.hpp"

using namespace nodal;
using cd = std::complex<double>;

namespace {

const SphericalTransplant& T16() {
  static const SphericalTransplant T = [] {
    ExtremalBuilder b;
    return transplant(b.build(16));
  }();
  return T;
}

}  // namespace

TEST_CASE("chart coefficients") {
  const auto& T = T16();
  CHECK(T.degree() == 16);
  CHECK(T.lambda() == 16.0 * 17.0);
  for (int j = 1; j <= 16; ++j) CHECK(legendre_derivative_at_one(16, j) > 0.0L);
  // beta_j = alpha_j / (A_j delta^j)
  for (int j : {1, 5, 16}) {
    const auto beta = T.expansion().coefficient(j);
    const double expected = std::log(std::abs(T.alpha()[j])) - log_legendre_derivative_at_one(16, j) - j * T.log_delta();
    CHECK(beta.log_magnitude == doctest::Approx(expected).epsilon(1e-12));
  }
  CHECK(T.deviation_bound() < T.kappa());
  CHECK(T.deviation_bound() == doctest::Approx(T.kappa() / 2));
  CHECK(T.max_B_over_A() == doctest::Approx(max_B_over_A(16)));
}

TEST_CASE("transplant vanishes at the pole and tracks P_N") {
  const auto& T = T16();
  CHECK(T.f_chart(0.0).is_zero());
  CHECK(T.F(0.0) == cd(0.0, 0.0));
  const auto dev = transplant_deviation(T);
  CHECK(dev.passed());
  CHECK(dev.max_deviation <= dev.bound);
  CHECK(transplant_consistency(T) < 1e-10);
  // F_N -> P_N as the chart radius shrinks
  CHECK(std::abs(T.F(0.5) - T.P(0.5)) <= T.deviation_bound());
}

TEST_CASE("transplant area") {
  const auto& T = T16();
  const auto a = transplant_area(T, {});
  CHECK(a.ratio.value > 0.0);
  CHECK(a.ratio.value < 1.0);
  CHECK(a.log_lambda == doctest::Approx(std::log(T.lambda())));
  CHECK(std::isfinite(a.ratio_times_log_lambda()));
  const auto margin = transplant_area(T, {}, T.kappa());
  CHECK(margin.ratio.value >= a.ratio.value - a.ratio.abs_error);
}

TEST_CASE("transplant json round trip") {
  const auto& T = T16();
  const auto U = transplant_from_json(to_json(T));
  CHECK(U.degree() == T.degree());
  CHECK(U.log_delta() == T.log_delta());
  CHECK(U.log_M() == T.log_M());
  for (std::size_t j = 0; j < T.alpha().size(); ++j) CHECK(U.alpha()[j] == T.alpha()[j]);
  CHECK(std::abs(U.F({0.3, 0.2}) - T.F({0.3, 0.2})) == 0.0);
}
