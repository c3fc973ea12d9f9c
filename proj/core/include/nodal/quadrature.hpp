#pragma once

#include <vector>

namespace nodal {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule with n nodes on [a, b]. Rules on [-1, 1] are cached
/// per n, so repeated calls are cheap.
QuadratureRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

}  // namespace nodal
