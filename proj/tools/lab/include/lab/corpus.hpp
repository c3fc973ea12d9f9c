#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "nodal/metrics.hpp"

namespace lab {

/// u = Re sum_{n=1}^{degree} a_n z^n, so u(0) = 0.
struct HarmonicPolynomial {
  int degree = 0;
  std::vector<std::complex<double>> a;  // a[0] = 0

  double operator()(std::complex<double> z) const;
  nodal::RealField field() const;
  nodal::AnalyticField analytic() const;
};

/// Degree uniform in [1, max_degree], coefficients standard complex normal;
/// item i uses substream i of the seed.
std::vector<HarmonicPolynomial> harmonic_corpus(std::uint64_t seed, int size, int max_degree);

}  // namespace lab
