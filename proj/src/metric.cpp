#include "curv4/metric.hpp"

#include <cmath>

namespace curv4 {

std::array<Mat4, 4> MetricChart::christoffels(const Vec4& x) const {
  const Mat4 g = metric(x);
  const std::array<Mat4, 4> dg = metric_derivative(x);
  const Mat4 ginv = g.inverse();
  std::array<Mat4, 4> gamma;
  for (int k = 0; k < 4; ++k) gamma[k].setZero();
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      Vec4 lower;  // lower(l) = 1/2 (d_i g_jl + d_j g_il - d_l g_ij)
      for (int l = 0; l < 4; ++l)
        lower(l) = 0.5 * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
      const Vec4 up = ginv * lower;
      for (int k = 0; k < 4; ++k) {
        gamma[k](i, j) = up(k);
        gamma[k](j, i) = up(k);
      }
    }
  return gamma;
}

Mat4 MetricChart::frame(const Vec4& x) const {
  const Mat4 g = metric(x);
  if (diagonal()) {
    Mat4 e = Mat4::Zero();
    for (int i = 0; i < 4; ++i) e(i, i) = 1.0 / std::sqrt(g(i, i));
    return e;
  }
  const Eigen::LLT<Mat4> llt(g);
  Mat4 lt = llt.matrixL().transpose();
  return lt.inverse();
}

Mat4 MetricChart::coframe(const Vec4& x) const {
  const Mat4 g = metric(x);
  if (diagonal()) {
    Mat4 e = Mat4::Zero();
    for (int i = 0; i < 4; ++i) e(i, i) = std::sqrt(g(i, i));
    return e;
  }
  const Eigen::LLT<Mat4> llt(g);
  return llt.matrixL().transpose();
}

namespace {

// 4th-order centered difference of the Christoffels in direction mu.
std::array<Mat4, 4> dgamma(const MetricChart& chart, const Vec4& x, int mu, double h) {
  Vec4 e = Vec4::Zero();
  e(mu) = 1.0;
  const auto gp2 = chart.christoffels(x + 2 * h * e);
  const auto gp1 = chart.christoffels(x + h * e);
  const auto gm1 = chart.christoffels(x - h * e);
  const auto gm2 = chart.christoffels(x - 2 * h * e);
  std::array<Mat4, 4> d;
  for (int k = 0; k < 4; ++k)
    d[k] = (-gp2[k] + 8.0 * gp1[k] - 8.0 * gm1[k] + gm2[k]) / (12.0 * h);
  return d;
}

}  // namespace

CurvatureTensor oracle_curvature(const MetricChart& chart, const Vec4& x, double h,
                                 double symmetrize_tol) {
  const Mat4 g = chart.metric(x);
  const auto gamma = chart.christoffels(x);
  std::array<std::array<Mat4, 4>, 4> dg;  // dg[mu][k](i,j) = d_mu Gamma^k_ij
  for (int mu = 0; mu < 4; ++mu) dg[mu] = dgamma(chart, x, mu, h);

  // R^l_{s mu nu} = d_mu G^l_{nu s} - d_nu G^l_{mu s} + G^l_{mu a}G^a_{nu s} - G^l_{nu a}G^a_{mu s}
  double rup[4][4][4][4];
  for (int l = 0; l < 4; ++l)
    for (int s = 0; s < 4; ++s)
      for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu) {
          double v = dg[mu][l](nu, s) - dg[nu][l](mu, s);
          for (int a = 0; a < 4; ++a)
            v += gamma[l](mu, a) * gamma[a](nu, s) - gamma[l](nu, a) * gamma[a](mu, s);
          rup[l][s][mu][nu] = v;
        }

  // Lower the first index, then push everything to the orthonormal frame.
  double rlow[4][4][4][4];
  for (int r = 0; r < 4; ++r)
    for (int s = 0; s < 4; ++s)
      for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu) {
          double v = 0.0;
          for (int l = 0; l < 4; ++l) v += g(r, l) * rup[l][s][mu][nu];
          rlow[r][s][mu][nu] = v;
        }

  const Mat4 e = chart.frame(x);
  const int n = chart.dim();
  std::array<double, 256> c{};
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int cc = 0; cc < n; ++cc)
        for (int d = 0; d < n; ++d) {
          double v = 0.0;
          for (int r = 0; r < n; ++r)
            for (int s = 0; s < n; ++s)
              for (int mu = 0; mu < n; ++mu)
                for (int nu = 0; nu < n; ++nu)
                  v += rlow[r][s][mu][nu] * e(r, a) * e(s, b) * e(mu, cc) * e(nu, d);
          c[((a * 4 + b) * 4 + cc) * 4 + d] = v;
        }
  // The differencing noise is absolute, so validate against an O(1) scale
  // floor; near-flat points would otherwise fail a purely relative check.
  double scale = 0.0;
  for (double v : c) scale = std::max(scale, std::abs(v));
  std::string which;
  const double residual = CurvatureTensor::symmetry_residual(c, &which) * scale;
  if (residual > symmetrize_tol * std::max(1.0, scale)) {
    throw NumericDomainError("models: finite-difference curvature violates " + which +
                             " (absolute residual " + std::to_string(residual) + ")");
  }
  return CurvatureTensor::project(c);
}

Mat4 oracle_ricci(const MetricChart& chart, const Vec4& x, double h) {
  const CurvatureTensor rm = oracle_curvature(chart, x, h);
  Mat4 ric = Mat4::Zero();
  for (int j = 0; j < 4; ++j)
    for (int l = 0; l < 4; ++l) {
      double s = 0.0;
      for (int i = 0; i < 4; ++i) s += rm.at(i, j, i, l);
      ric(j, l) = s;
    }
  return ric;
}

namespace {

GeodesicState geodesic_rhs(const MetricChart& chart, const GeodesicState& s) {
  const auto gamma = chart.christoffels(s.x);
  Vec4 acc;
  for (int k = 0; k < 4; ++k) acc(k) = -s.v.dot(gamma[k] * s.v);
  return {s.v, acc};
}

}  // namespace

GeodesicState integrate_geodesic(const MetricChart& chart, const Vec4& x0, const Vec4& v0,
                                 int steps) {
  GeodesicState s{x0, v0};
  const double dt = 1.0 / steps;
  for (int i = 0; i < steps; ++i) {
    const GeodesicState k1 = geodesic_rhs(chart, s);
    const GeodesicState k2 = geodesic_rhs(chart, {s.x + 0.5 * dt * k1.x, s.v + 0.5 * dt * k1.v});
    const GeodesicState k3 = geodesic_rhs(chart, {s.x + 0.5 * dt * k2.x, s.v + 0.5 * dt * k2.v});
    const GeodesicState k4 = geodesic_rhs(chart, {s.x + dt * k3.x, s.v + dt * k3.v});
    s.x += (dt / 6.0) * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
    s.v += (dt / 6.0) * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
  }
  s.x = chart.wrap(s.x);
  return s;
}

ShootingResult shoot_distance(const MetricChart& chart, const Vec4& p, const Vec4& q, double tol,
                              int steps) {
  ShootingResult best;
  Vec4 v = chart.displacement(p, q);
  const double scale = std::max(1.0, v.norm());

  auto miss_of = [&](const Vec4& vel) {
    const GeodesicState end = integrate_geodesic(chart, p, vel, steps);
    return chart.displacement(end.x, q);
  };

  // Cheap first phase: fixed-point iteration with the chart-identity
  // Jacobian, which contracts quickly well inside the curvature scale.
  double damp = 1.0;
  Vec4 miss = miss_of(v);
  best.miss = miss.norm();
  best.velocity = v;
  for (int it = 0; it < 20 && best.miss > tol * scale; ++it) {
    const Vec4 v_next = v + damp * miss;
    const Vec4 miss_next = miss_of(v_next);
    if (miss_next.norm() < miss.norm()) {
      v = v_next;
      miss = miss_next;
      damp = std::min(1.0, damp * 1.5);
      if (miss.norm() < best.miss) {
        best.miss = miss.norm();
        best.velocity = v;
      }
    } else {
      damp *= 0.5;
      if (damp < 1e-3) break;
    }
  }

  if (best.miss > tol * scale) {
    // Newton with finite-difference Jacobian and backtracking line search.
    v = best.velocity;
    const double fd = 1e-6 * scale;
    for (int it = 0; it < 30 && best.miss > tol * scale; ++it) {
      const Vec4 m0 = miss_of(v);
      Mat4 jac;
      for (int c = 0; c < 4; ++c) {
        Vec4 dv = Vec4::Zero();
        dv(c) = fd;
        jac.col(c) = (miss_of(v + dv) - m0) / fd;
      }
      const Vec4 step = jac.fullPivLu().solve(-m0);
      if (!step.allFinite()) break;
      double alpha = 1.0;
      bool accepted = false;
      for (int ls = 0; ls < 8; ++ls) {
        const Vec4 cand = v + alpha * step;
        const double m = miss_of(cand).norm();
        if (m < m0.norm()) {
          v = cand;
          if (m < best.miss) {
            best.miss = m;
            best.velocity = v;
          }
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!accepted) break;
    }
  }

  best.converged = best.miss <= tol * scale;
  const Mat4 g = chart.metric(p);
  best.distance = std::sqrt(best.velocity.dot(g * best.velocity));
  return best;
}

}  // namespace curv4
