#include "sdcr/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sdcr {

std::vector<QuadraturePoint1D> gauss_legendre(int points) {
  if (points < 1) throw std::invalid_argument("gauss_legendre: points must be >= 1");
  std::vector<QuadraturePoint1D> rule(static_cast<std::size_t>(points));
  const int n = points;
  // Newton iteration on P_n from the Chebyshev-like initial guess, then
  // map [-1, 1] -> [0, 1].
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute derivative at the converged root for the weight.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    auto& lo = rule[static_cast<std::size_t>(i)];
    auto& hi = rule[static_cast<std::size_t>(n - 1 - i)];
    lo = {0.5 * (1.0 - x), 0.5 * w};
    hi = {0.5 * (1.0 + x), 0.5 * w};
  }
  if (n % 2 == 1) rule[static_cast<std::size_t>(n / 2)].t = 0.5;
  return rule;
}

std::vector<TrianglePoint> triangle_rule(int degree) {
  if (degree < 0) throw std::invalid_argument("triangle_rule: negative degree");
  // f(xi, eta) with xi = u, eta = (1-u) v has degree <= degree+1 in u once
  // the Jacobian (1-u) is included.
  const int nu = gauss_points_for_degree(degree + 1);
  const int nv = gauss_points_for_degree(degree);
  const auto gu = gauss_legendre(nu);
  const auto gv = gauss_legendre(nv);
  std::vector<TrianglePoint> rule;
  rule.reserve(gu.size() * gv.size());
  for (const auto& a : gu) {
    for (const auto& b : gv) {
      // Reference area is 1/2; weights normalised to sum to 1.
      rule.push_back({a.t, (1.0 - a.t) * b.t, 2.0 * a.weight * b.weight * (1.0 - a.t)});
    }
  }
  return rule;
}

const std::array<TrianglePoint, 3>& triangle_midpoint_rule() {
  static const std::array<TrianglePoint, 3> rule{{
      {0.5, 0.5, 1.0 / 3.0},
      {0.0, 0.5, 1.0 / 3.0},
      {0.5, 0.0, 1.0 / 3.0},
  }};
  return rule;
}

}  // namespace sdcr
