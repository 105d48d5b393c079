#pragma once

#include <vector>

namespace wsym {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  template <class F>
  auto integrate(F&& f) const {
    auto acc = weights[0] * f(nodes[0]);
    for (std::size_t i = 1; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
    return acc;
  }
};

/// n-point Gauss–Legendre rule on [a, b]; exact for polynomials of degree ≤ 2n − 1.
QuadratureRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

}  // namespace wsym
