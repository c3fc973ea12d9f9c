#include "lab/corpus.hpp"

#include <random>

#include "nodal/parallel.hpp"

namespace lab {

double HarmonicPolynomial::operator()(std::complex<double> z) const {
  std::complex<double> acc = 0.0;
  for (int n = degree; n >= 1; --n) acc = (acc + a[n]) * z;
  return acc.real();
}

nodal::RealField HarmonicPolynomial::field() const {
  return [p = *this](std::complex<double> z) { return p(z); };
}

nodal::AnalyticField HarmonicPolynomial::analytic() const {
  return [p = *this](std::complex<double> z) {
    std::complex<double> acc = 0.0;
    for (int n = p.degree; n >= 1; --n) acc = (acc + p.a[n]) * z;
    return acc;
  };
}

std::vector<HarmonicPolynomial> harmonic_corpus(std::uint64_t seed, int size, int max_degree) {
  std::vector<HarmonicPolynomial> out;
  out.reserve(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i) {
    auto rng = nodal::substream(seed, static_cast<std::uint64_t>(i));
    std::uniform_int_distribution<int> deg(1, max_degree);
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    HarmonicPolynomial p;
    p.degree = deg(rng);
    p.a.assign(static_cast<std::size_t>(p.degree) + 1, 0.0);
    for (int n = 1; n <= p.degree; ++n) {
      const double re = gauss(rng);
      p.a[n] = {re, gauss(rng)};
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace lab
