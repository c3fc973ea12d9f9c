#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "nodal/errors.hpp"
#include "nodal/extremal.hpp"
#include "nodal/nadirashvili.hpp"

using namespace nodal;
using std::numbers::pi;

namespace {

NadirashviliConfig small_config() {
  NadirashviliConfig c;
  c.restarts = 3;
  c.evaluation_budget = 1500;
  c.certificate_area.budget = 20000;
  c.seed = 5;
  return c;
}

Candidate random_candidate(int n_max, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Candidate c = Candidate::monomial(1, n_max);
  for (int n = 0; n < n_max; ++n) {
    c.p[n] = g(rng);
    c.q[n] = g(rng);
  }
  return c;
}

}  // namespace

TEST_CASE("feasibility") {
  CHECK(feasibility(Candidate::monomial(1, 1), 2));
  CHECK_FALSE(feasibility(Candidate::monomial(3, 3), 4));
  Candidate zero;
  zero.p = zero.q = {0.0, 0.0};
  CHECK_THROWS_AS(feasibility(zero, 2), DegenerateInputError);
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto c = random_candidate(10, seed);
    const int nu = candidate_sign_changes(c);
    CHECK(nu == dense_scan_sign_changes(c.field(), 0.0, 1.0, 1000000));
    CHECK(nu == fft_sign_changes(c));
    CHECK(feasibility(c, nu));
    CHECK_FALSE(feasibility(c, nu - 2));
  }
}

TEST_CASE("canonical classes") {
  CHECK(canonical_class(2) == 2);
  CHECK(canonical_class(9) == 8);
  CHECK_THROWS_AS(canonical_class(1), PreconditionError);
}

TEST_CASE("objective") {
  const auto c = random_candidate(8, 3);
  const double a = polar_fft_area(c, 48);
  auto scaled = c;
  for (auto& v : scaled.p) v *= 7.5;
  for (auto& v : scaled.q) v *= 7.5;
  CHECK(polar_fft_area(scaled, 48) == doctest::Approx(a).epsilon(1e-12));
  CHECK(candidate_sign_changes(scaled) == candidate_sign_changes(c));
  const auto grid = positivity_area(c.field(), Disc(0.0, 1.0));
  CHECK(std::abs(a - grid.value) < 0.02);
  CHECK(polar_fft_area(Candidate::monomial(1, 1), 48) == doctest::Approx(pi / 2).epsilon(1e-3));
}

TEST_CASE("warm starts") {
  const auto w = warm_start(2, {});
  CHECK(w.N == 0);
  CHECK(w.candidate.p[0] == 1.0);

  ExtremalBuilder b;
  std::vector<ExtremalPolynomial> cons{b.build(16), b.build(64)};
  const int nu64 = candidate_sign_changes(Candidate::from_polynomial(cons[1].alpha, 64));
  const int d = canonical_class(std::max(64, nu64) + 1);
  CHECK(warm_start(d, cons).N == 64);
  CHECK(warm_start(8, cons).N == 0);
}

TEST_CASE("minimize_area") {
  const auto cfg = small_config();
  const auto r2 = minimize_area(2, cfg);
  CHECK(r2.d == 2);
  CHECK(r2.best_area() <= pi / 2 + r2.best.abs_error);
  CHECK(feasibility(r2.certificate, 2));
  CHECK(r2.restarts == cfg.restarts);
  CHECK(!r2.caveat.empty());

  // soundness: the certificate re-measures to the reported value
  AreaOptions doubled = cfg.certificate_area;
  doubled.budget *= 2;
  CHECK(agree_within_bars(r2.best, revalidate(r2, doubled)));

  const auto sweep = nadirashvili_sweep({2, 4, 6}, cfg);
  REQUIRE(sweep.size() == 3);
  for (std::size_t i = 1; i < sweep.size(); ++i) {
    CHECK(sweep[i].best_area() <= sweep[i - 1].best_area() + sweep[i].best.abs_error + sweep[i - 1].best.abs_error);
    CHECK(feasibility(sweep[i].certificate, sweep[i].d));
  }

  // deterministic
  const auto again = minimize_area(2, cfg);
  CHECK(again.best_area() == r2.best_area());
  CHECK(again.certificate.p == r2.certificate.p);
}

TEST_CASE("estimate json round trip") {
  const auto r = minimize_area(4, small_config());
  const auto back = estimate_from_json(to_json(r));
  CHECK(back.d == r.d);
  CHECK(back.best_area() == r.best_area());
  CHECK(back.certificate.p == r.certificate.p);
  CHECK(back.certificate.q == r.certificate.q);
  CHECK(back.caveat == r.caveat);
}
