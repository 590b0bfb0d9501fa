#pragma once

#include <array>
#include <vector>

#include "sdcr/assembly.hpp"
#include "sdcr/mesh.hpp"

namespace sdcr {

// Dense univariate polynomial, coefficients in ascending order.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coefficients) : c_(std::move(coefficients)) {}

  double operator()(double x) const;
  Polynomial derivative() const;
  Polynomial operator*(const Polynomial& other) const;
  int degree() const { return static_cast<int>(c_.size()) - 1; }

  // prod_k (x - r_k)
  static Polynomial from_roots(const std::vector<double>& roots);

 private:
  std::vector<double> c_;
};

// Smooth exact solution of the coupled problem built from the stream
// function phi(x, y) = x^2 (x-1)^3 y^2 (y-1)^2 on each unit-square
// subdomain, u = (-d phi/dy, d phi/dx), and the quadratic pressure
// x^2 - 2xy + y^2/2 - 1 shifted to zero mean. In the Darcy square the
// stream function is the same profile translated by the subdomain offset,
// so u vanishes on the whole outer boundary and on the interface.
// Sources are obtained by exact differentiation for any mu and K.
class ExactCase {
 public:
  ExactCase(const MaterialParams& params, const TwoRegionDomain& domain);

  Vec2 u(const Point2& p, Region region) const;
  Mat2 grad_u(const Point2& p, Region region) const;  // (r, s) = d u_r / d x_s
  double p(const Point2& p, Region region) const;
  Vec2 grad_p(const Point2& p) const;
  // Stokes: -2 mu div D(u) + grad p. Darcy: mu K^-1 u + grad p.
  Vec2 f(const Point2& p, Region region) const;
  double g(const Point2&, Region) const { return 0.0; }

  // Mean of the unshifted pressure over the domain.
  double pressure_mean() const { return pressure_mean_; }
  const MaterialParams& params() const { return params_; }
  const TwoRegionDomain& domain() const { return domain_; }

  SourceData source() const;

 private:
  double local_x(const Point2& p, Region region) const;
  double local_y(const Point2& p) const { return p.y() - domain_.y_min; }

  MaterialParams params_;
  TwoRegionDomain domain_;
  Mat2 K_inv_;
  double pressure_mean_ = 0.0;
  // a(x) = x^2 (x-1)^3, b(y) = y^2 (y-1)^2 and their derivatives a[k] = a^(k).
  std::array<Polynomial, 4> a_;
  std::array<Polynomial, 4> b_;
};

ExactCase manufactured_case(const MaterialParams& params, const TwoRegionDomain& domain = {});

// The closed-form polynomials as published for mu = alpha1 = 1, K = I,
// written in global coordinates. Kept verbatim for cross-checking.
namespace published {
double u1(double x, double y);
double u2(double x, double y);
double pressure(double x, double y);
double f1(double x, double y);
double f2(double x, double y);
double k1(double x, double y);
double k2(double x, double y);
}  // namespace published

}  // namespace sdcr
