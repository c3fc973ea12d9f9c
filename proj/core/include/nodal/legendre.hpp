#pragma once

#include <vector>

namespace nodal {

// Legendre polynomial derivatives L_N^{(j)}. Values reach (2N)!/(2^N N!)
// (about 1e583 for N = 256), so everything is carried in long double.

/// j-th derivative of L_N at x in [-1, 1]. Exact 0 for j > N; DomainError for
/// N < 0 or j < 0.
long double legendre_derivative(int N, int j, long double x);

/// All derivatives L_N^{(j)}(x), j = 0..N, by the upward recurrence in the
/// degree with derivative columns carried jointly.
std::vector<long double> legendre_derivatives(int N, long double x);

/// Closed form L_N^{(j)}(1) = (N + j)! / (2^j j! (N - j)!).
long double legendre_derivative_at_one(int N, int j);
double log_legendre_derivative_at_one(int N, int j);

/// Degree-N table of all derivative orders on a fixed set of abscissae.
class LegendreTable {
public:
  LegendreTable(int N, std::vector<long double> abscissae);

  int degree() const noexcept { return N_; }
  const std::vector<long double>& abscissae() const noexcept { return x_; }
  /// L_N^{(j)} at abscissa index k.
  long double value(int j, std::size_t k) const;

private:
  int N_;
  std::vector<long double> x_;
  std::vector<long double> values_;  // (N+1) per abscissa
};

}  // namespace nodal
