#include "nodal/cauchy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>

#include "nodal/errors.hpp"
#include "nodal/fft.hpp"
#include "nodal/parallel.hpp"

namespace nodal {

CauchyCoefficients cauchy_coefficients(const ScaledField& g, int n_max,
                                       const std::function<double(int)>& radius_for,
                                       const CauchyOptions& opt) {
  if (n_max < 0) throw DomainError("cauchy_coefficients: negative degree");
  if (opt.bucket < 1) throw DomainError("cauchy_coefficients: bucket must be positive");
  CauchyCoefficients out;
  out.a.resize(n_max + 1);
  out.radius.resize(n_max + 1);
  out.log_noise.resize(n_max + 1);
  out.log_circle_max.resize(n_max + 1);

  for (int lo = 0; lo <= n_max; lo += opt.bucket) {
    const int hi = std::min(n_max, lo + opt.bucket - 1);
    const double rho = radius_for(std::max(1, (lo + hi + 1) / 2));
    if (!(rho > 0.0)) throw DomainError("cauchy_coefficients: radius must be positive");
    const std::size_t M = std::bit_ceil(static_cast<std::size_t>(
        std::max(opt.min_samples, opt.oversample * (hi + 1))));

    std::vector<ScaledComplex> samples(M);
    parallel_for(M, [&](std::size_t k) {
      samples[k] = g(std::polar(rho, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(M)));
    });
    double L = -std::numeric_limits<double>::infinity();
    for (const auto& s : samples) L = std::max(L, s.log_magnitude);
    if (!std::isfinite(L)) L = 0.0;  // g vanishes on the circle
    std::vector<std::complex<double>> data(M);
    for (std::size_t k = 0; k < M; ++k) data[k] = samples[k].to_complex_scaled(L);
    fft_inplace(data, true);

    const double log_M = std::log(static_cast<double>(M));
    const double log_rho = std::log(rho);
    // log(relative_noise * e^L + absolute_noise), without leaving log space.
    double log_value_noise = std::log(opt.relative_noise) + L;
    if (opt.absolute_noise > 0.0) {
      const double l2 = std::log(opt.absolute_noise);
      const double hi_l = std::max(log_value_noise, l2), lo_l = std::min(log_value_noise, l2);
      log_value_noise = hi_l + std::log1p(std::exp(lo_l - hi_l));
    }
    for (int n = lo; n <= hi; ++n) {
      const std::complex<double> c = data[static_cast<std::size_t>(n)];
      const double shift = L - log_M - n * log_rho;
      out.a[n] = c == 0.0 ? ScaledComplex::zero()
                          : ScaledComplex::from_log(std::log(std::abs(c)) + shift, std::arg(c));
      out.radius[n] = rho;
      out.log_circle_max[n] = L;
      // The DFT of M samples with per-sample error e has error <= M e; after
      // the 1/M normalisation the coefficient error is e / rho^n.
      out.log_noise[n] = log_value_noise - n * log_rho;
    }
  }
  return out;
}

}  // namespace nodal
