#include "nodal/legendre.hpp"

#include <cmath>

#include "nodal/errors.hpp"

namespace nodal {

std::vector<long double> legendre_derivatives(int N, long double x) {
  if (N < 0) throw DomainError("legendre_derivatives: negative degree");
  std::vector<long double> result(N + 1, 0.0L);
  // prev[n] = L_n^{(j-1)}(x), cur[n] = L_n^{(j)}(x), n = 0..N.
  std::vector<long double> prev(N + 1, 0.0L), cur(N + 1, 0.0L);
  cur[0] = 1.0L;
  if (N >= 1) cur[1] = x;
  for (int n = 1; n < N; ++n) cur[n + 1] = ((2.0L * n + 1.0L) * x * cur[n] - n * cur[n - 1]) / (n + 1.0L);
  result[0] = cur[N];
  for (int j = 1; j <= N; ++j) {
    prev.swap(cur);
    std::fill(cur.begin(), cur.end(), 0.0L);
    // L_j^{(j)} = (2j)! / (2^j j!) = (2j - 1)!!; below degree j the column vanishes.
    long double dfact = 1.0L;
    for (int k = 1; k <= j; ++k) dfact *= (2.0L * k - 1.0L);
    cur[j] = dfact;
    for (int n = j; n < N; ++n) {
      // (n+1) L_{n+1}^{(j)} = (2n+1)(x L_n^{(j)} + j L_n^{(j-1)}) - n L_{n-1}^{(j)}
      const long double lower = n >= 1 ? cur[n - 1] : 0.0L;
      cur[n + 1] = ((2.0L * n + 1.0L) * (x * cur[n] + j * prev[n]) - n * lower) / (n + 1.0L);
    }
    result[j] = cur[N];
  }
  return result;
}

long double legendre_derivative(int N, int j, long double x) {
  if (N < 0) throw DomainError("legendre_derivative: negative degree");
  if (j < 0) throw DomainError("legendre_derivative: negative derivative order");
  if (j > N) return 0.0L;
  return legendre_derivatives(N, x)[j];
}

double log_legendre_derivative_at_one(int N, int j) {
  if (N < 0 || j < 0 || j > N) throw DomainError("log_legendre_derivative_at_one: need 0 <= j <= N");
  return std::lgamma(N + j + 1.0) - j * std::log(2.0) - std::lgamma(j + 1.0) - std::lgamma(N - j + 1.0);
}

long double legendre_derivative_at_one(int N, int j) {
  if (N < 0 || j < 0) throw DomainError("legendre_derivative_at_one: negative argument");
  if (j > N) return 0.0L;
  // Product form keeps full long double precision:
  // (N+j)!/(N-j)! / (2^j j!) = prod_{k=1..j} (N+k)(N-k+1) / (2k).
  long double value = 1.0L;
  for (int k = 1; k <= j; ++k) value *= static_cast<long double>(N + k) * (N - k + 1) / (2.0L * k);
  return value;
}

LegendreTable::LegendreTable(int N, std::vector<long double> abscissae)
    : N_(N), x_(std::move(abscissae)) {
  if (N < 0) throw DomainError("LegendreTable: negative degree");
  values_.reserve(x_.size() * (N_ + 1));
  for (long double x : x_) {
    auto col = legendre_derivatives(N_, x);
    values_.insert(values_.end(), col.begin(), col.end());
  }
}

long double LegendreTable::value(int j, std::size_t k) const {
  if (j < 0) throw DomainError("LegendreTable: negative derivative order");
  if (j > N_) return 0.0L;
  return values_.at(k * (N_ + 1) + j);
}

}  // namespace nodal
