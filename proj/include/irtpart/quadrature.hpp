#ifndef IRTPART_QUADRATURE_HPP
#define IRTPART_QUADRATURE_HPP

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "irtpart/common.hpp"

namespace irtpart {

struct QuadratureRule {
  std::vector<double> nodes;    // ability grid, ascending
  std::vector<double> weights;  // normalized to sum exactly 1
};

namespace detail {

// Orthonormal Hermite polynomial (physicists' weight e^{-x^2}) at x, plus the
// previous-order value needed for derivatives and weights.
inline void hermite_orthonormal(int n, double x, double& h_n, double& h_prev) {
  double p0 = 0.0;
  double p1 = std::pow(std::numbers::pi, -0.25);
  for (int j = 1; j <= n; ++j) {
    const double p2 = x * std::sqrt(2.0 / j) * p1 - std::sqrt((j - 1.0) / j) * p0;
    p0 = p1;
    p1 = p2;
  }
  h_n = p1;
  h_prev = p0;
}

}  // namespace detail

/// Gauss-Hermite rule transformed to integrate against the standard normal
/// density: sum_q w_q f(x_q) ~ E[f(Z)], Z ~ N(0,1). Roots found by Newton
/// iteration on the orthonormal recurrence, largest first.
inline QuadratureRule gauss_hermite_normal(int n) {
  if (n < 1) throw Error("quadrature: need at least one node");
  QuadratureRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);

  const int half = (n + 1) / 2;
  double z = 0.0, z_first = 0.0, z_second = 0.0;
  for (int i = 0; i < half; ++i) {
    if (i == 0)
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    else if (i == 1)
      z -= 1.14 * std::pow((double)n, 0.426) / z;
    else if (i == 2)
      z = 1.86 * z - 0.86 * z_first;
    else if (i == 3)
      z = 1.91 * z - 0.91 * z_second;
    else
      z = 2.0 * z - rule.nodes[n - i + 1];

    const bool center = n % 2 == 1 && i == half - 1;
    if (center) z = 0.0;

    double h_n = 0.0, h_prev = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      detail::hermite_orthonormal(n, z, h_n, h_prev);
      if (center) break;
      const double step = h_n / (std::sqrt(2.0 * n) * h_prev);
      z -= step;
      if (std::abs(step) <= 1e-15 * (1.0 + std::abs(z))) {
        detail::hermite_orthonormal(n, z, h_n, h_prev);
        break;
      }
    }
    if (i == 0) z_first = z;
    if (i == 1) z_second = z;

    const double pp = std::sqrt(2.0 * n) * h_prev;
    const double w = 2.0 / (pp * pp);
    rule.nodes[n - 1 - i] = z;
    rule.nodes[i] = center ? 0.0 : -z;
    rule.weights[n - 1 - i] = w;
    rule.weights[i] = w;
  }

  // Physicists' convention -> standard normal: theta = sqrt(2) x, w /= sqrt(pi).
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] *= std::numbers::sqrt2;
    rule.weights[i] /= std::sqrt(std::numbers::pi);
    total += rule.weights[i];
  }
  for (int i = 0; i < n; ++i) rule.weights[i] /= total;
  return rule;
}

}  // namespace irtpart

#endif
