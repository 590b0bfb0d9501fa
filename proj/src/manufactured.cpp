#include "sdcr/manufactured.hpp"

#include <cmath>

#include <Eigen/LU>

#include "sdcr/quadrature.hpp"

namespace sdcr {

double Polynomial::operator()(double x) const {
  double value = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) value = value * x + *it;
  return value;
}

Polynomial Polynomial::derivative() const {
  if (c_.size() <= 1) return Polynomial({0.0});
  std::vector<double> d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
  return Polynomial(std::move(d));
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
  std::vector<double> out(c_.size() + other.c_.size() - 1, 0.0);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    for (std::size_t j = 0; j < other.c_.size(); ++j) out[i + j] += c_[i] * other.c_[j];
  }
  return Polynomial(std::move(out));
}

Polynomial Polynomial::from_roots(const std::vector<double>& roots) {
  Polynomial p({1.0});
  for (double r : roots) p = p * Polynomial({-r, 1.0});
  return p;
}

namespace {

double raw_pressure(double x, double y) { return x * x - 2.0 * x * y + 0.5 * y * y - 1.0; }

}  // namespace

ExactCase::ExactCase(const MaterialParams& params, const TwoRegionDomain& domain)
    : params_(params), domain_(domain) {
  params_.validate();
  domain_.validate();
  K_inv_ = params_.K.inverse();

  a_[0] = Polynomial::from_roots({0.0, 0.0, 1.0, 1.0, 1.0});
  b_[0] = Polynomial::from_roots({0.0, 0.0, 1.0, 1.0});
  for (std::size_t k = 1; k < 4; ++k) {
    a_[k] = a_[k - 1].derivative();
    b_[k] = b_[k - 1].derivative();
  }

  // Mean of the quadratic pressure; a 2-point tensor rule is exact.
  const auto rule = gauss_legendre(2);
  double integral = 0.0;
  const double wx = domain_.x_max - domain_.x_min;
  const double wy = domain_.y_max - domain_.y_min;
  for (const auto& qx : rule) {
    for (const auto& qy : rule) {
      integral += qx.weight * qy.weight *
                  raw_pressure(domain_.x_min + qx.t * wx, domain_.y_min + qy.t * wy);
    }
  }
  pressure_mean_ = integral;  // weights already normalised by the area
}

double ExactCase::local_x(const Point2& p, Region region) const {
  return p.x() - (region == Region::Stokes ? domain_.x_min : domain_.x_interface);
}

Vec2 ExactCase::u(const Point2& p, Region region) const {
  const double x = local_x(p, region);
  const double y = local_y(p);
  return {-a_[0](x) * b_[1](y), a_[1](x) * b_[0](y)};
}

Mat2 ExactCase::grad_u(const Point2& p, Region region) const {
  const double x = local_x(p, region);
  const double y = local_y(p);
  Mat2 g;
  g << -a_[1](x) * b_[1](y), -a_[0](x) * b_[2](y),
        a_[2](x) * b_[0](y),  a_[1](x) * b_[1](y);
  return g;
}

double ExactCase::p(const Point2& p, Region) const {
  return raw_pressure(p.x(), p.y()) - pressure_mean_;
}

Vec2 ExactCase::grad_p(const Point2& p) const {
  return {2.0 * p.x() - 2.0 * p.y(), -2.0 * p.x() + p.y()};
}

Vec2 ExactCase::f(const Point2& p, Region region) const {
  const double x = local_x(p, region);
  const double y = local_y(p);
  if (region == Region::Darcy) {
    return params_.mu * (K_inv_ * u(p, region)) + grad_p(p);
  }
  // Second derivatives of u = (-a b', a' b).
  const double u1_xx = -a_[2](x) * b_[1](y);
  const double u1_yy = -a_[0](x) * b_[3](y);
  const double u1_xy = -a_[1](x) * b_[2](y);
  const double u2_xx = a_[3](x) * b_[0](y);
  const double u2_yy = a_[1](x) * b_[2](y);
  const double u2_xy = a_[2](x) * b_[1](y);
  // div D(u), row-wise divergence of the symmetric gradient.
  const Vec2 div_d(u1_xx + 0.5 * (u1_yy + u2_xy), 0.5 * (u1_xy + u2_xx) + u2_yy);
  return -2.0 * params_.mu * div_d + grad_p(p);
}

SourceData ExactCase::source() const {
  return {[this](const Point2& p, Region r) { return f(p, r); },
          [this](const Point2& p, Region r) { return g(p, r); }};
}

ExactCase manufactured_case(const MaterialParams& params, const TwoRegionDomain& domain) {
  return ExactCase(params, domain);
}

namespace published {

double u1(double x, double y) {
  return -2.0 * std::pow(-1.0 + x, 3) * x * x * (-1.0 + y) * y * (-1.0 + 2.0 * y);
}

double u2(double x, double y) {
  return std::pow(-1.0 + x, 2) * x * (-2.0 + 5.0 * x) * std::pow(-1.0 + y, 2) * y * y;
}

double pressure(double x, double y) { return raw_pressure(x, y); }

double f1(double x, double y) {
  const double yy = (-1.0 + y) * y;
  return 4.0 * (-1.0 + x) * (-1.0 + 2.0 * y) *
             (-6.0 * std::pow(x, 3) + 3.0 * std::pow(x, 4) + yy - 8.0 * x * yy + x * x * (3.0 + 10.0 * yy)) +
         2.0 * x - 2.0 * y;
}

double f2(double x, double y) {
  const double yy = (-1.0 + y) * y;
  return -2.0 * (9.0 * yy * yy - 12.0 * std::pow(x, 3) * (1.0 + 6.0 * yy) +
                 5.0 * std::pow(x, 4) * (1.0 + 6.0 * yy) - 2.0 * x * (1.0 + 6.0 * yy * (1.0 + 3.0 * yy)) +
                 x * x * (9.0 + 6.0 * yy * (9.0 + 5.0 * yy))) -
         2.0 * x + y;
}

double k1(double x, double y) {
  return std::pow(-1.0 + x, 2) * x * (-2.0 + 5.0 * x) * std::pow(-1.0 + y, 2) * y * y + 2.0 * x - 2.0 * y;
}

double k2(double x, double y) {
  return std::pow(-1.0 + x, 2) * x * (-2.0 + 5.0 * x) * std::pow(-1.0 + y, 2) * y * y - 2.0 * x + y;
}

}  // namespace published

}  // namespace sdcr
