#include "dense_oracle.hpp"

#include <cmath>

namespace sdcr::oracle {

namespace {

// Gauss-Legendre on [-1, 1].
constexpr std::array<double, 6> kNodes6 = {-0.9324695142031521, -0.6612093864662645, -0.2386191860831969,
                                           0.2386191860831969,  0.6612093864662645,  0.9324695142031521};
constexpr std::array<double, 6> kWeights6 = {0.1713244923791704, 0.3607615730481386, 0.4679139345726910,
                                             0.4679139345726910, 0.3607615730481386, 0.1713244923791704};
constexpr std::array<double, 5> kNodes5 = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                           0.9061798459386640};
constexpr std::array<double, 5> kWeights5 = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                             0.4786286704993665, 0.2369268850561891};

struct Affine {
  Vec2 value0;  // value at corner 0
  Mat2 grad;
};

// Linear field on element t fitted through its corner values.
Affine fit(const std::array<Point2, 3>& c, const std::array<Vec2, 3>& v) {
  Mat2 E;
  E.col(0) = c[1] - c[0];
  E.col(1) = c[2] - c[0];
  Mat2 dV;
  dV.col(0) = v[1] - v[0];
  dV.col(1) = v[2] - v[0];
  return {v[0], dV * E.inverse()};
}

}  // namespace

double integrate_triangle(const std::array<Point2, 3>& c, const std::function<double(const Point2&)>& f) {
  const double jac = std::abs((c[1] - c[0]).x() * (c[2] - c[0]).y() - (c[1] - c[0]).y() * (c[2] - c[0]).x());
  double sum = 0.0;
  for (std::size_t i = 0; i < 6; ++i) {
    const double s = 0.5 * (kNodes6[i] + 1.0);
    for (std::size_t j = 0; j < 6; ++j) {
      const double r = 0.5 * (kNodes6[j] + 1.0);
      // (s, r) in the unit square -> (s, r (1 - s)) in the reference triangle.
      const double xi = s;
      const double eta = r * (1.0 - s);
      const Point2 x = c[0] + xi * (c[1] - c[0]) + eta * (c[2] - c[0]);
      sum += 0.25 * kWeights6[i] * kWeights6[j] * (1.0 - s) * f(x);
    }
  }
  return jac * sum;
}

double integrate_segment(const Point2& a, const Point2& b, const std::function<double(const Point2&)>& f) {
  double sum = 0.0;
  for (std::size_t i = 0; i < 5; ++i) {
    const double t = 0.5 * (kNodes5[i] + 1.0);
    sum += 0.5 * kWeights5[i] * f(a + t * (b - a));
  }
  return (b - a).norm() * sum;
}

DenseBlocks assemble(const Mesh& mesh, const DofMap& dofs, const MaterialParams& params, const SourceData& source) {
  const Index nv = dofs.n_velocity();
  const Index np = dofs.n_pressure();
  const Index nt = mesh.num_triangles();

  std::vector<DiscreteVelocity> unit(static_cast<std::size_t>(nv));
  for (Index i = 0; i < nv; ++i) {
    unit[static_cast<std::size_t>(i)].coefficients = Eigen::VectorXd::Unit(nv, i);
  }
  const auto value = [&](Index i, Index t, const Point2& x) {
    return eval_velocity(mesh, dofs, unit[static_cast<std::size_t>(i)], t, x);
  };

  // affine[t][i]
  std::vector<std::vector<Affine>> affine(static_cast<std::size_t>(nt));
  for (Index t = 0; t < nt; ++t) {
    const auto c = mesh.corners(t);
    for (Index i = 0; i < nv; ++i) {
      affine[static_cast<std::size_t>(t)].push_back(fit(c, {value(i, t, c[0]), value(i, t, c[1]), value(i, t, c[2])}));
    }
  }
  const auto grad = [&](Index i, Index t) -> const Mat2& {
    return affine[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)].grad;
  };

  DenseBlocks out;
  out.stiffness = Eigen::MatrixXd::Zero(nv, nv);
  out.penalty = Eigen::MatrixXd::Zero(nv, nv);
  out.norm_gram = Eigen::MatrixXd::Zero(nv, nv);
  out.B = Eigen::MatrixXd::Zero(np, nv);
  out.F = Eigen::VectorXd::Zero(nv);
  out.G = Eigen::VectorXd::Zero(np);
  const Mat2 K_inv = params.K.inverse();

  for (Index t = 0; t < nt; ++t) {
    const auto c = mesh.corners(t);
    const Region region = mesh.triangle(t).region;
    for (Index i = 0; i < nv; ++i) {
      const Mat2& gi = grad(i, t);
      for (Index j = 0; j < nv; ++j) {
        const Mat2& gj = grad(j, t);
        if (region == Region::Stokes) {
          const Mat2 Di = 0.5 * (gi + gi.transpose());
          const Mat2 Dj = 0.5 * (gj + gj.transpose());
          out.stiffness(i, j) +=
              integrate_triangle(c, [&](const Point2&) { return 2.0 * params.mu * (Di.array() * Dj.array()).sum(); });
          out.norm_gram(i, j) += integrate_triangle(c, [&](const Point2&) { return (gi.array() * gj.array()).sum(); });
        } else {
          out.stiffness(i, j) += integrate_triangle(c, [&](const Point2& x) {
            return params.mu * value(i, t, x).dot(K_inv * value(j, t, x)) + gi.trace() * gj.trace();
          });
          out.norm_gram(i, j) += integrate_triangle(
              c, [&](const Point2& x) { return value(i, t, x).dot(value(j, t, x)) + gi.trace() * gj.trace(); });
        }
      }
      out.B(t, i) = -integrate_triangle(c, [&](const Point2&) { return gi.trace(); });
      out.F[i] += integrate_triangle(c, [&](const Point2& x) {
        double v = source.f(x, region).dot(value(i, t, x));
        if (region == Region::Darcy) v += source.g(x, region) * gi.trace();
        return v;
      });
    }
    out.G[t] = -integrate_triangle(c, [&](const Point2& x) { return source.g(x, region); });
  }

  for (Index e = 0; e < mesh.num_edges(); ++e) {
    const Edge& edge = mesh.edge(e);
    const Point2& a = mesh.vertex(edge.vertices[0]);
    const Point2& b = mesh.vertex(edge.vertices[1]);
    const auto jump = [&](Index i, const Point2& x) {
      Vec2 v = -value(i, edge.elements[0], x);
      if (!edge.is_boundary()) v += value(i, edge.elements[1], x);
      return v;
    };
    double weight = 1.0 / edge.length;
    bool normal_only = false;
    switch (edge.cls) {
      case EdgeClass::InteriorStokes:
      case EdgeClass::GammaS: weight *= params.stokes_penalty(); break;
      case EdgeClass::InteriorDarcy: break;
      case EdgeClass::GammaD:
      case EdgeClass::InterfaceI: normal_only = true; break;
    }
    Index stokes_side = kNoElement;
    if (edge.cls == EdgeClass::InterfaceI) {
      stokes_side = mesh.triangle(edge.elements[0]).region == Region::Stokes ? edge.elements[0] : edge.elements[1];
    }
    const Vec2 tau(-edge.normal.y(), edge.normal.x());
    const double bjs = params.mu * params.alpha1 / std::sqrt(tau.dot(params.K * tau));
    for (Index i = 0; i < nv; ++i) {
      for (Index j = 0; j < nv; ++j) {
        const double pen = weight * integrate_segment(a, b, [&](const Point2& x) {
          const Vec2 ji = jump(i, x);
          const Vec2 jj = jump(j, x);
          return normal_only ? edge.normal.dot(ji) * edge.normal.dot(jj) : ji.dot(jj);
        });
        out.penalty(i, j) += pen;
        out.norm_gram(i, j) += pen;
        if (stokes_side != kNoElement) {
          const double trace = integrate_segment(a, b, [&](const Point2& x) {
            return tau.dot(value(i, stokes_side, x)) * tau.dot(value(j, stokes_side, x));
          });
          out.stiffness(i, j) += bjs * trace;
          out.norm_gram(i, j) += trace;
        }
      }
    }
  }
  out.A = out.stiffness + out.penalty;
  return out;
}

}  // namespace sdcr::oracle
