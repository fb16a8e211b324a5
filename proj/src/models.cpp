#include "curv4/models.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>

namespace curv4 {

double SampledDomain::volume() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

double ModelManifold::curvature_norm_at(const ChartPoint& p) const {
  return curvature_at(p).norm();
}

SampledDomain ModelManifold::ball_domain(const ChartPoint& p, double r, double) const {
  // Homogeneous default: every ball integrand in this library is a curvature
  // invariant, so the center with the exact ball volume is a faithful sample.
  SampledDomain d;
  d.model = name_;
  d.dimension = dim_;
  d.points = {p};
  d.weights = {ball_volume(p, r)};
  d.quadrature_tol = 1e-9;
  return d;
}

KillingSample killing_sample(const MetricChart& chart, const Vec4& v_chart, const Mat4& dv_chart,
                             const Vec4& x) {
  const auto gamma = chart.christoffels(x);
  Mat4 nabla;  // nabla(l, m) = d_m v^l + G^l_{m s} v^s
  for (int l = 0; l < 4; ++l)
    for (int m = 0; m < 4; ++m) nabla(l, m) = dv_chart(l, m) + gamma[l].row(m).dot(v_chart);
  const Mat4 e = chart.frame(x);
  const Mat4 theta = chart.coframe(x);
  KillingSample ks;
  ks.v = v_chart;
  ks.grad = theta * nabla * e;
  const Mat4 g = chart.metric(x);
  ks.norm = std::sqrt(v_chart.dot(g * v_chart));
  return ks;
}

namespace {

double clamp01(double x) { return std::min(1.0, std::max(-1.0, x)); }

// ---------------------------------------------------------------------------
// Grid sampling helpers

struct AxisGrid {
  double lo = 0.0, step = 0.0;
  int n = 1;
  double at(int i) const { return lo + (i + 0.5) * step; }
};

// Tensor-product midpoint grid; weight(x) is the volume density sqrt(det g).
SampledDomain grid_domain(const std::string& model, int dim, const std::array<AxisGrid, 4>& axes,
                          const std::function<double(const Vec4&)>& density, double resolution,
                          double quad_tol) {
  SampledDomain d;
  d.model = model;
  d.dimension = dim;
  d.resolution = resolution;
  d.quadrature_tol = quad_tol;
  double cell = 1.0;
  for (int a = 0; a < dim; ++a) cell *= axes[a].step;
  std::array<int, 4> idx{0, 0, 0, 0};
  const std::size_t total = std::size_t(axes[0].n) * axes[1].n * axes[2].n * axes[3].n;
  d.points.reserve(total);
  d.weights.reserve(total);
  for (;;) {
    Vec4 x = Vec4::Zero();
    for (int a = 0; a < dim; ++a) x(a) = axes[a].at(idx[a]);
    d.points.push_back({0, x});
    d.weights.push_back(density(x) * cell);
    int a = 0;
    for (; a < 4; ++a) {
      if (++idx[a] < axes[a].n) break;
      idx[a] = 0;
    }
    if (a == 4) break;
  }
  return d;
}

// ---------------------------------------------------------------------------
// Polar ball quadrature for models without closed-form ball integrals.
// Marches geodesic rays from p on a direction lattice and assembles the
// volume element from the lattice Jacobian.

SampledDomain polar_ball_domain(const ModelManifold& m, const MetricChart& chart,
                                const ChartPoint& p, double r, double resolution) {
  if (r > m.max_ball_radius(p)) {
    throw NumericDomainError("models: ball of radius " + std::to_string(r) +
                             " exceeds chart coverage of " + m.name() + " (max " +
                             std::to_string(m.max_ball_radius(p)) + ")");
  }
  const int nr = std::clamp(int(std::llround(r / resolution)), 5, 40);
  const int n1 = std::clamp(int(std::llround(kPi * r / resolution / 2.0)), 6, 24);
  const int n2 = n1;
  int n3 = std::clamp(int(std::llround(kPi * r / resolution)), 8, 48);
  n3 += n3 % 2;  // pole reflections below need an even azimuthal count
  const double h1 = kPi / n1, h2 = kPi / n2, h3 = 2.0 * kPi / n3, dr = r / nr;

  const Mat4 ep = chart.frame(p.x);
  const int rays = n1 * n2 * n3;
  std::vector<Vec4> xs(std::size_t(nr) * rays), vs(std::size_t(nr) * rays);
  auto ray_index = [&](int i1, int i2, int i3) { return (i1 * n2 + i2) * n3 + i3; };

  for (int i1 = 0; i1 < n1; ++i1)
    for (int i2 = 0; i2 < n2; ++i2)
      for (int i3 = 0; i3 < n3; ++i3) {
        const double a1 = (i1 + 0.5) * h1, a2 = (i2 + 0.5) * h2, a3 = (i3 + 0.5) * h3;
        const Vec4 dir(std::cos(a1), std::sin(a1) * std::cos(a2),
                       std::sin(a1) * std::sin(a2) * std::cos(a3),
                       std::sin(a1) * std::sin(a2) * std::sin(a3));
        GeodesicState s{p.x, ep * dir};
        // Advance to the first radial midpoint, then step midpoint to midpoint.
        s = integrate_geodesic(chart, s.x, s.v * (0.5 * dr), 2);
        s.v /= (0.5 * dr);
        const int ri = ray_index(i1, i2, i3);
        for (int j = 0; j < nr; ++j) {
          xs[std::size_t(j) * rays + ri] = s.x;
          vs[std::size_t(j) * rays + ri] = s.v;
          if (j + 1 < nr) {
            s = integrate_geodesic(chart, s.x, s.v * dr, 2);
            s.v /= dr;
          }
        }
      }

  SampledDomain d;
  d.model = m.name();
  d.dimension = 4;
  d.resolution = resolution;
  d.quadrature_tol = 0.05;
  d.points.reserve(std::size_t(nr) * rays);
  d.weights.reserve(std::size_t(nr) * rays);
  for (int j = 0; j < nr; ++j)
    for (int i1 = 0; i1 < n1; ++i1)
      for (int i2 = 0; i2 < n2; ++i2)
        for (int i3 = 0; i3 < n3; ++i3) {
          const auto at = [&](int a, int b, int c) -> const Vec4& {
            return xs[std::size_t(j) * rays + ray_index(a, b, c)];
          };
          const Vec4& x = at(i1, i2, i3);
          Mat4 jac;
          jac.col(0) = vs[std::size_t(j) * rays + ray_index(i1, i2, i3)];
          auto diff = [&](const Vec4& a, const Vec4& b, double dh) {
            return chart.displacement(b, a) / dh;
          };
          // Central differences throughout; rays past the polar edges are
          // recovered from the grid by the direction-sphere reflections
          // (-a1, a2, a3) ~ (a1, pi - a2, a3 + pi) and
          // (a1, -a2, a3) ~ (a1, a2, a3 + pi).
          const int i3_op = (i3 + n3 / 2) % n3;
          const Vec4& up1 = (i1 == n1 - 1) ? at(n1 - 1, n2 - 1 - i2, i3_op) : at(i1 + 1, i2, i3);
          const Vec4& dn1 = (i1 == 0) ? at(0, n2 - 1 - i2, i3_op) : at(i1 - 1, i2, i3);
          jac.col(1) = diff(up1, dn1, 2 * h1);
          const Vec4& up2 = (i2 == n2 - 1) ? at(i1, n2 - 1, i3_op) : at(i1, i2 + 1, i3);
          const Vec4& dn2 = (i2 == 0) ? at(i1, 0, i3_op) : at(i1, i2 - 1, i3);
          jac.col(2) = diff(up2, dn2, 2 * h2);
          jac.col(3) = diff(at(i1, i2, (i3 + 1) % n3), at(i1, i2, (i3 + n3 - 1) % n3), 2 * h3);
          const double dens = std::sqrt(std::max(0.0, chart.metric(x).determinant()));
          const double w = dens * std::abs(jac.determinant()) * dr * h1 * h2 * h3;
          d.points.push_back({0, x});
          d.weights.push_back(w);
        }
  return d;
}

// ---------------------------------------------------------------------------
// Flat torus, dimension 2 or 4.

class TorusChart final : public MetricChart {
 public:
  TorusChart(std::vector<double> periods) : periods_(std::move(periods)) {}
  int dim() const override { return int(periods_.size()); }
  Mat4 metric(const Vec4&) const override { return Mat4::Identity(); }
  std::array<Mat4, 4> metric_derivative(const Vec4&) const override {
    return {Mat4::Zero(), Mat4::Zero(), Mat4::Zero(), Mat4::Zero()};
  }
  bool diagonal() const override { return true; }
  Vec4 wrap(const Vec4& x) const override {
    Vec4 y = x;
    for (std::size_t i = 0; i < periods_.size(); ++i) {
      y(i) = std::fmod(y(i), periods_[i]);
      if (y(i) < 0) y(i) += periods_[i];
    }
    return y;
  }
  Vec4 displacement(const Vec4& p, const Vec4& q) const override {
    Vec4 d = q - p;
    for (std::size_t i = 0; i < periods_.size(); ++i) {
      const double L = periods_[i];
      d(i) = std::remainder(d(i), L);
    }
    return d;
  }

 private:
  std::vector<double> periods_;
};

class FlatTorus final : public ModelManifold {
 public:
  FlatTorus(std::vector<double> periods) : periods_(periods), chart_(periods) {
    dim_ = int(periods.size());
    name_ = dim_ == 2 ? "flat-torus-2d" : "flat-torus";
    for (std::size_t i = 0; i < periods_.size(); ++i)
      params_["L" + std::to_string(i + 1)] = periods_[i];
    lambda_ = 0.0;
  }

  bool compact() const override { return true; }
  bool homogeneous() const override { return true; }
  double diameter() const override {
    double s = 0;
    for (double L : periods_) s += 0.25 * L * L;
    return std::sqrt(s);
  }
  CurvatureTensor curvature_at(const ChartPoint&) const override {
    return CurvatureTensor::zero();
  }
  double curvature_norm_at(const ChartPoint&) const override { return 0.0; }

  double distance(const ChartPoint& p, const ChartPoint& q) const override {
    const Vec4 d = chart_.displacement(p.x, q.x);
    double s = 0;
    for (int i = 0; i < dim_; ++i) s += d(i) * d(i);
    return std::sqrt(s);
  }

  double ball_volume(const ChartPoint&, double r) const override {
    if (r <= 0) return 0.0;
    const double lmin = *std::min_element(periods_.begin(), periods_.end());
    double total = 1.0;
    for (double L : periods_) total *= L;
    if (r >= diameter()) return total;
    if (r <= 0.5 * lmin) {
      return dim_ == 2 ? kPi * r * r : 0.5 * kPi * kPi * r * r * r * r;
    }
    return wrapped_volume(r);
  }

  double ball_curvature_sup(const ChartPoint&, double) const override { return 0.0; }

  SampledDomain sample_domain(const RegionSpec& region, double res, uint64_t) const override {
    std::array<AxisGrid, 4> axes;
    for (int a = 0; a < 4; ++a) axes[a] = {0.0, 1.0, 1};
    switch (region.kind) {
      case RegionSpec::Kind::Full:
        for (int a = 0; a < dim_; ++a) {
          const int n = std::max(1, int(std::llround(periods_[a] / res)));
          axes[a] = {0.0, periods_[a] / n, n};
        }
        break;
      case RegionSpec::Kind::Box:
        for (int a = 0; a < dim_; ++a) {
          const double len = region.hi(a) - region.lo(a);
          const int n = std::max(1, int(std::llround(len / res)));
          axes[a] = {region.lo(a), len / n, n};
        }
        break;
      case RegionSpec::Kind::Ball: {
        for (int a = 0; a < dim_; ++a) {
          const double len = 2 * region.radius;
          const int n = std::max(1, int(std::llround(len / res)));
          axes[a] = {region.center.x(a) - region.radius, len / n, n};
        }
        auto d = grid_domain(name_, dim_, axes, [](const Vec4&) { return 1.0; }, res, 0.02);
        SampledDomain out = d;
        out.points.clear();
        out.weights.clear();
        for (std::size_t i = 0; i < d.points.size(); ++i) {
          ChartPoint cp{0, chart_.wrap(d.points[i].x)};
          if (distance(region.center, cp) <= region.radius) {
            out.points.push_back(cp);
            out.weights.push_back(d.weights[i]);
          }
        }
        return out;
      }
    }
    return grid_domain(name_, dim_, axes, [](const Vec4&) { return 1.0; }, res, 1e-12);
  }

  std::vector<KillingField> killing_fields() const override {
    std::vector<KillingField> fields;
    for (int a = 0; a < dim_; ++a) {
      Vec4 dir = Vec4::Zero();
      dir(a) = 1.0;
      fields.push_back({"translation-" + std::to_string(a + 1), [dir](const ChartPoint&) {
                          KillingSample ks;
                          ks.v = dir;
                          ks.grad = Mat4::Zero();
                          ks.norm = 1.0;
                          return ks;
                        }});
    }
    return fields;
  }

  const MetricChart* metric_chart() const override { return &chart_; }

 private:
  // Volume of {sum_i d_i(x_i)^2 < r^2} with d_i the wrapped 1-D distances,
  // via the nested integral over u_i = d_i^2 (separable structure).
  double wrapped_volume(double r) const {
    std::vector<double> caps(periods_.size());
    for (std::size_t i = 0; i < periods_.size(); ++i) caps[i] = 0.25 * periods_[i] * periods_[i];
    return nested(r * r, int(periods_.size()) - 1, caps);
  }
  double nested(double s, int k, const std::vector<double>& caps) const {
    if (s <= 0) return 0.0;
    if (k == 0) return 2.0 * std::sqrt(std::min(s, caps[0]));
    const double tmax = std::sqrt(std::min(s, caps[k]));
    const int n = 64;
    const double h = tmax / n;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const double t = (i + 0.5) * h;
      acc += nested(s - t * t, k - 1, caps);
    }
    return 2.0 * acc * h;
  }

  std::vector<double> periods_;
  TorusChart chart_;
};

// ---------------------------------------------------------------------------
// Round sphere S^4(rho), hyperspherical chart.

class SphereChart final : public MetricChart {
 public:
  explicit SphereChart(double rho) : rho_(rho) {}
  Mat4 metric(const Vec4& x) const override {
    const double s1 = std::sin(x(0)), s2 = std::sin(x(1)), s3 = std::sin(x(2));
    Mat4 g = Mat4::Zero();
    g(0, 0) = 1.0;
    g(1, 1) = s1 * s1;
    g(2, 2) = s1 * s1 * s2 * s2;
    g(3, 3) = s1 * s1 * s2 * s2 * s3 * s3;
    return g * (rho_ * rho_);
  }
  std::array<Mat4, 4> metric_derivative(const Vec4& x) const override {
    const double s1 = std::sin(x(0)), c1 = std::cos(x(0));
    const double s2 = std::sin(x(1)), c2 = std::cos(x(1));
    const double s3 = std::sin(x(2)), c3 = std::cos(x(2));
    std::array<Mat4, 4> d;
    for (auto& m : d) m.setZero();
    const double r2 = rho_ * rho_;
    d[0](1, 1) = 2 * s1 * c1;
    d[0](2, 2) = 2 * s1 * c1 * s2 * s2;
    d[0](3, 3) = 2 * s1 * c1 * s2 * s2 * s3 * s3;
    d[1](2, 2) = s1 * s1 * 2 * s2 * c2;
    d[1](3, 3) = s1 * s1 * 2 * s2 * c2 * s3 * s3;
    d[2](3, 3) = s1 * s1 * s2 * s2 * 2 * s3 * c3;
    for (auto& m : d) m *= r2;
    return d;
  }
  bool diagonal() const override { return true; }
  double chart_margin(const Vec4& x) const override {
    const double s1 = std::sin(x(0)), s2 = std::sin(x(1));
    double m = std::min(x(0), kPi - x(0));
    m = std::min(m, s1 * std::min(x(1), kPi - x(1)));
    m = std::min(m, s1 * s2 * std::min(x(2), kPi - x(2)));
    return rho_ * m;
  }
  Vec4 wrap(const Vec4& x) const override {
    Vec4 y = x;
    y(3) = std::fmod(y(3), 2 * kPi);
    if (y(3) < 0) y(3) += 2 * kPi;
    return y;
  }
  Vec4 displacement(const Vec4& p, const Vec4& q) const override {
    Vec4 d = q - p;
    d(3) = std::remainder(d(3), 2 * kPi);
    return d;
  }

 private:
  double rho_;
};

class Sphere4 final : public ModelManifold {
 public:
  explicit Sphere4(double rho) : rho_(rho), chart_(rho) {
    name_ = "s4";
    params_["radius"] = rho;
    lambda_ = 0.0;
  }

  bool compact() const override { return true; }
  bool homogeneous() const override { return true; }
  double diameter() const override { return kPi * rho_; }

  CurvatureTensor curvature_at(const ChartPoint&) const override {
    return CurvatureTensor::constant_curvature(1.0 / (rho_ * rho_));
  }
  double curvature_norm_at(const ChartPoint&) const override {
    return std::sqrt(24.0) / (rho_ * rho_);
  }

  Eigen::Matrix<double, 5, 1> embed(const Vec4& a) const {
    const double s1 = std::sin(a(0)), c1 = std::cos(a(0));
    const double s2 = std::sin(a(1)), c2 = std::cos(a(1));
    const double s3 = std::sin(a(2)), c3 = std::cos(a(2));
    const double s4 = std::sin(a(3)), c4 = std::cos(a(3));
    Eigen::Matrix<double, 5, 1> e;
    e << c1, s1 * c2, s1 * s2 * c3, s1 * s2 * s3 * c4, s1 * s2 * s3 * s4;
    return e * rho_;
  }

  double distance(const ChartPoint& p, const ChartPoint& q) const override {
    const double chord = (embed(p.x) - embed(q.x)).norm();
    return 2.0 * rho_ * std::asin(clamp01(chord / (2.0 * rho_)));
  }

  double ball_volume(const ChartPoint&, double r) const override {
    // 2 pi^2 rho^4 (2/3 - c + c^3/3) = 2 pi^2 rho^4 (1-c)^2 (c+2)/3, written
    // with 1-c = 2 sin^2(t/2) to stay accurate for small balls.
    const double t = std::min(std::max(r, 0.0) / rho_, kPi);
    const double s = std::sin(0.5 * t);
    const double one_minus_c = 2.0 * s * s;
    const double c = std::cos(t);
    return 2.0 * kPi * kPi * std::pow(rho_, 4) * one_minus_c * one_minus_c * (c + 2.0) / 3.0;
  }

  double ball_curvature_sup(const ChartPoint&, double) const override {
    return std::sqrt(24.0) / (rho_ * rho_);
  }

  SampledDomain sample_domain(const RegionSpec& region, double res, uint64_t) const override {
    std::array<AxisGrid, 4> axes;
    auto density = [this](const Vec4& x) {
      const double s1 = std::sin(x(0)), s2 = std::sin(x(1)), s3 = std::sin(x(2));
      return rho_ * rho_ * rho_ * rho_ * s1 * s1 * s1 * s2 * s2 * s3;
    };
    switch (region.kind) {
      case RegionSpec::Kind::Full: {
        const double scale = kPi * rho_ / res;
        const int n1 = std::max(4, int(std::llround(scale)));
        const int n2 = std::max(4, int(std::llround(0.64 * scale)));
        const int n3 = std::max(3, int(std::llround(0.50 * scale)));
        const int n4 = std::max(3, int(std::llround(0.85 * scale)));
        axes[0] = {0.0, kPi / n1, n1};
        axes[1] = {0.0, kPi / n2, n2};
        axes[2] = {0.0, kPi / n3, n3};
        axes[3] = {0.0, 2 * kPi / n4, n4};
        return grid_domain(name_, 4, axes, density, res, 0.005);
      }
      case RegionSpec::Kind::Box: {
        for (int a = 0; a < 4; ++a) {
          const double len = region.hi(a) - region.lo(a);
          const int n = std::max(1, int(std::llround(len * rho_ / res)));
          axes[a] = {region.lo(a), len / n, n};
        }
        return grid_domain(name_, 4, axes, density, res, 0.01);
      }
      case RegionSpec::Kind::Ball: {
        auto full = sample_domain(RegionSpec::full(), res, 0);
        SampledDomain out = full;
        out.points.clear();
        out.weights.clear();
        for (std::size_t i = 0; i < full.points.size(); ++i)
          if (distance(region.center, full.points[i]) <= region.radius) {
            out.points.push_back(full.points[i]);
            out.weights.push_back(full.weights[i]);
          }
        out.quadrature_tol = 0.02;
        return out;
      }
    }
    throw ConfigError("models: unsupported region");
  }

  const MetricChart* metric_chart() const override { return &chart_; }

 private:
  double rho_;
  SphereChart chart_;
};

// ---------------------------------------------------------------------------
// Hyperbolic space H^4(rho), hyperboloid chart over R^4.

class HyperbolicChart final : public MetricChart {
 public:
  explicit HyperbolicChart(double rho) : rho_(rho) {}
  Mat4 metric(const Vec4& x) const override {
    const double u = 1.0 + x.squaredNorm();
    return rho_ * rho_ * (Mat4::Identity() - (x * x.transpose()) / u);
  }
  std::array<Mat4, 4> metric_derivative(const Vec4& x) const override {
    const double u = 1.0 + x.squaredNorm();
    std::array<Mat4, 4> d;
    for (int k = 0; k < 4; ++k) {
      Mat4 m;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          double v = -((i == k ? x(j) : 0.0) + (j == k ? x(i) : 0.0)) / u;
          v += x(i) * x(j) * 2.0 * x(k) / (u * u);
          m(i, j) = v;
        }
      d[k] = rho_ * rho_ * m;
    }
    return d;
  }

 private:
  double rho_;
};

class Hyperbolic4 final : public ModelManifold {
 public:
  explicit Hyperbolic4(double rho) : rho_(rho), chart_(rho) {
    name_ = "h4";
    params_["radius"] = rho;
    lambda_ = std::sqrt(3.0) / rho;
  }

  bool compact() const override { return false; }
  bool homogeneous() const override { return true; }
  double diameter() const override { return kInf; }

  CurvatureTensor curvature_at(const ChartPoint&) const override {
    return CurvatureTensor::constant_curvature(-1.0 / (rho_ * rho_));
  }
  double curvature_norm_at(const ChartPoint&) const override {
    return std::sqrt(24.0) / (rho_ * rho_);
  }

  double distance(const ChartPoint& p, const ChartPoint& q) const override {
    const double a = p.x.squaredNorm(), b = q.x.squaredNorm(), c = p.x.dot(q.x);
    const double s = a + b + a * b;
    const double d = s / (std::sqrt(1.0 + s) + 1.0) - c;  // cosh(dist/rho) - 1
    const double dd = std::max(0.0, d);
    return rho_ * std::log1p(dd + std::sqrt(dd * (dd + 2.0)));
  }

  double ball_volume(const ChartPoint&, double r) const override {
    // (c^3/3 - c + 2/3) = (c-1)^2 (c+2)/3 with c-1 = 2 sinh^2(t/2).
    const double t = std::max(r, 0.0) / rho_;
    const double s = std::sinh(0.5 * t);
    const double c_minus_1 = 2.0 * s * s;
    const double c = std::cosh(t);
    return 2.0 * kPi * kPi * std::pow(rho_, 4) * c_minus_1 * c_minus_1 * (c + 2.0) / 3.0;
  }

  double ball_curvature_sup(const ChartPoint&, double) const override {
    return std::sqrt(24.0) / (rho_ * rho_);
  }

  SampledDomain sample_domain(const RegionSpec& region, double res, uint64_t) const override {
    auto density = [this](const Vec4& x) {
      return std::sqrt(std::max(0.0, chart_.metric(x).determinant()));
    };
    std::array<AxisGrid, 4> axes;
    switch (region.kind) {
      case RegionSpec::Kind::Full:
        throw ConfigError("models: h4 is non-compact; use a box or ball region");
      case RegionSpec::Kind::Box: {
        for (int a = 0; a < 4; ++a) {
          const double len = region.hi(a) - region.lo(a);
          const int n = std::max(1, int(std::llround(len * rho_ / res)));
          axes[a] = {region.lo(a), len / n, n};
        }
        return grid_domain(name_, 4, axes, density, res, 0.01);
      }
      case RegionSpec::Kind::Ball: {
        const double half = 2.0 * (region.radius / rho_) *
                            (1.0 + region.center.x.lpNorm<Eigen::Infinity>() + region.radius / rho_);
        for (int a = 0; a < 4; ++a) {
          const double lo = region.center.x(a) - half;
          const int n = std::max(1, int(std::llround(2 * half * rho_ / res)));
          axes[a] = {lo, 2 * half / n, n};
        }
        auto d = grid_domain(name_, 4, axes, density, res, 0.02);
        SampledDomain out = d;
        out.points.clear();
        out.weights.clear();
        for (std::size_t i = 0; i < d.points.size(); ++i)
          if (distance(region.center, d.points[i]) <= region.radius) {
            out.points.push_back(d.points[i]);
            out.weights.push_back(d.weights[i]);
          }
        return out;
      }
    }
    throw ConfigError("models: unsupported region");
  }

  const MetricChart* metric_chart() const override { return &chart_; }

 private:
  double rho_;
  HyperbolicChart chart_;
};

// ---------------------------------------------------------------------------
// Product S^2(a) x S^2(b), spherical chart (theta1, phi1, theta2, phi2).

class ProductChart final : public MetricChart {
 public:
  ProductChart(double a, double b) : a_(a), b_(b) {}
  Mat4 metric(const Vec4& x) const override {
    Mat4 g = Mat4::Zero();
    const double s1 = std::sin(x(0)), s2 = std::sin(x(2));
    g(0, 0) = a_ * a_;
    g(1, 1) = a_ * a_ * s1 * s1;
    g(2, 2) = b_ * b_;
    g(3, 3) = b_ * b_ * s2 * s2;
    return g;
  }
  std::array<Mat4, 4> metric_derivative(const Vec4& x) const override {
    std::array<Mat4, 4> d;
    for (auto& m : d) m.setZero();
    d[0](1, 1) = a_ * a_ * 2.0 * std::sin(x(0)) * std::cos(x(0));
    d[2](3, 3) = b_ * b_ * 2.0 * std::sin(x(2)) * std::cos(x(2));
    return d;
  }
  bool diagonal() const override { return true; }
  double chart_margin(const Vec4& x) const override {
    const double m1 = a_ * std::min(x(0), kPi - x(0));
    const double m2 = b_ * std::min(x(2), kPi - x(2));
    return std::min(m1, m2);
  }
  Vec4 wrap(const Vec4& x) const override {
    Vec4 y = x;
    for (int i : {1, 3}) {
      y(i) = std::fmod(y(i), 2 * kPi);
      if (y(i) < 0) y(i) += 2 * kPi;
    }
    return y;
  }
  Vec4 displacement(const Vec4& p, const Vec4& q) const override {
    Vec4 d = q - p;
    d(1) = std::remainder(d(1), 2 * kPi);
    d(3) = std::remainder(d(3), 2 * kPi);
    return d;
  }

 private:
  double a_, b_;
};

class ProductS2S2 final : public ModelManifold {
 public:
  ProductS2S2(double a, double b) : a_(a), b_(b), chart_(a, b) {
    name_ = "s2xs2";
    params_["a"] = a;
    params_["b"] = b;
    lambda_ = 0.0;
  }

  bool compact() const override { return true; }
  bool homogeneous() const override { return true; }
  double diameter() const override { return kPi * std::sqrt(a_ * a_ + b_ * b_); }

  CurvatureTensor curvature_at(const ChartPoint&) const override {
    std::array<double, 256> c{};
    auto set_plane = [&c](int i, int j, double k) {
      auto put = [&c](int a, int b, int cc, int d, double v) {
        c[((a * 4 + b) * 4 + cc) * 4 + d] = v;
      };
      put(i, j, i, j, k);
      put(j, i, j, i, k);
      put(i, j, j, i, -k);
      put(j, i, i, j, -k);
    };
    set_plane(0, 1, 1.0 / (a_ * a_));
    set_plane(2, 3, 1.0 / (b_ * b_));
    return CurvatureTensor::from_components_unchecked(c);
  }
  double curvature_norm_at(const ChartPoint&) const override {
    return 2.0 * std::sqrt(1.0 / std::pow(a_, 4) + 1.0 / std::pow(b_, 4));
  }

  static double sphere_distance(double radius, double t1, double p1, double t2, double p2) {
    const Eigen::Vector3d u(std::sin(t1) * std::cos(p1), std::sin(t1) * std::sin(p1),
                            std::cos(t1));
    const Eigen::Vector3d v(std::sin(t2) * std::cos(p2), std::sin(t2) * std::sin(p2),
                            std::cos(t2));
    const double chord = (u - v).norm();
    return 2.0 * radius * std::asin(clamp01(chord / 2.0));
  }

  double distance(const ChartPoint& p, const ChartPoint& q) const override {
    const double d1 = sphere_distance(a_, p.x(0), p.x(1), q.x(0), q.x(1));
    const double d2 = sphere_distance(b_, p.x(2), p.x(3), q.x(2), q.x(3));
    return std::hypot(d1, d2);
  }

  double ball_volume(const ChartPoint&, double r) const override {
    if (r <= 0) return 0.0;
    // 1-D quadrature over the first-factor radius.
    const double tmax = std::min(r, kPi * a_);
    const int n = 512;
    const double h = tmax / n;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const double t = (i + 0.5) * h;
      const double s = std::sqrt(std::max(0.0, r * r - t * t));
      const double cap = std::min(s, kPi * b_);
      const double area2 = 2.0 * kPi * b_ * b_ * (1.0 - std::cos(cap / b_));
      acc += 2.0 * kPi * a_ * std::sin(t / a_) * area2;
    }
    return acc * h;
  }

  double ball_curvature_sup(const ChartPoint& p, double) const override {
    return curvature_norm_at(p);
  }

  SampledDomain sample_domain(const RegionSpec& region, double res, uint64_t) const override {
    auto density = [this](const Vec4& x) {
      return a_ * a_ * b_ * b_ * std::sin(x(0)) * std::sin(x(2));
    };
    std::array<AxisGrid, 4> axes;
    switch (region.kind) {
      case RegionSpec::Kind::Full: {
        const int n1 = std::max(4, int(std::llround(kPi * a_ / res)));
        const int n2 = std::max(3, int(std::llround(4.0 * a_ / res)));
        const int n3 = std::max(4, int(std::llround(kPi * b_ / res)));
        const int n4 = std::max(3, int(std::llround(4.0 * b_ / res)));
        axes[0] = {0.0, kPi / n1, n1};
        axes[1] = {0.0, 2 * kPi / n2, n2};
        axes[2] = {0.0, kPi / n3, n3};
        axes[3] = {0.0, 2 * kPi / n4, n4};
        return grid_domain(name_, 4, axes, density, res, 0.01);
      }
      case RegionSpec::Kind::Box: {
        for (int a = 0; a < 4; ++a) {
          const double len = region.hi(a) - region.lo(a);
          const double scale = (a < 2) ? a_ : b_;
          const int n = std::max(1, int(std::llround(len * scale / res)));
          axes[a] = {region.lo(a), len / n, n};
        }
        return grid_domain(name_, 4, axes, density, res, 0.01);
      }
      case RegionSpec::Kind::Ball: {
        auto full = sample_domain(RegionSpec::full(), res, 0);
        SampledDomain out = full;
        out.points.clear();
        out.weights.clear();
        for (std::size_t i = 0; i < full.points.size(); ++i)
          if (distance(region.center, full.points[i]) <= region.radius) {
            out.points.push_back(full.points[i]);
            out.weights.push_back(full.weights[i]);
          }
        out.quadrature_tol = 0.02;
        return out;
      }
    }
    throw ConfigError("models: unsupported region");
  }

  const MetricChart* metric_chart() const override { return &chart_; }

 private:
  double a_, b_;
  ProductChart chart_;
};

// ---------------------------------------------------------------------------
// Warped product over S^3: g = sigma^2 [ h(y)^2 |dy|^2 + f(y)^2 dtheta^2 ],
// stereographic y for S^3 and a (possibly warped) circle fiber.
// h = 2/(1+|y|^2); f = 1 + w cos(chi) with cos(chi) = (1-|y|^2)/(1+|y|^2).

constexpr double kWarpedChartYMax = 3.0;

class WarpedChart final : public MetricChart {
 public:
  WarpedChart(double w, double sigma) : w_(w), sigma_(sigma) {}

  double hfun(const Vec4& x) const { return 2.0 / (1.0 + y2(x)); }
  double ffun(const Vec4& x) const {
    const double u = 1.0 + y2(x);
    return 1.0 - w_ + 2.0 * w_ / u;
  }
  double chi(const Vec4& x) const { return std::acos(clamp01((1.0 - y2(x)) / (1.0 + y2(x)))); }

  Mat4 metric(const Vec4& x) const override {
    const double h = hfun(x), f = ffun(x), s2 = sigma_ * sigma_;
    Mat4 g = Mat4::Zero();
    g(0, 0) = g(1, 1) = g(2, 2) = s2 * h * h;
    g(3, 3) = s2 * f * f;
    return g;
  }
  std::array<Mat4, 4> metric_derivative(const Vec4& x) const override {
    const double u = 1.0 + y2(x);
    const double h = 2.0 / u, f = 1.0 - w_ + 2.0 * w_ / u, s2 = sigma_ * sigma_;
    std::array<Mat4, 4> d;
    for (auto& m : d) m.setZero();
    for (int k = 0; k < 3; ++k) {
      const double dh = -2.0 * 2.0 * x(k) / (u * u);       // d_k h
      const double df = -2.0 * w_ * 2.0 * x(k) / (u * u);  // d_k f
      for (int i = 0; i < 3; ++i) d[k](i, i) = s2 * 2.0 * h * dh;
      d[k](3, 3) = s2 * 2.0 * f * df;
    }
    return d;
  }
  bool diagonal() const override { return true; }
  double chart_margin(const Vec4& x) const override {
    const double chi_cap = std::acos(clamp01((1.0 - kWarpedChartYMax * kWarpedChartYMax) /
                                             (1.0 + kWarpedChartYMax * kWarpedChartYMax)));
    return sigma_ * (chi_cap - chi(x));
  }
  Vec4 wrap(const Vec4& x) const override {
    Vec4 y = x;
    y(3) = std::fmod(y(3), 2 * kPi);
    if (y(3) < 0) y(3) += 2 * kPi;
    return y;
  }
  Vec4 displacement(const Vec4& p, const Vec4& q) const override {
    Vec4 d = q - p;
    d(3) = std::remainder(d(3), 2 * kPi);
    return d;
  }

 private:
  static double y2(const Vec4& x) { return x(0) * x(0) + x(1) * x(1) + x(2) * x(2); }
  double w_, sigma_;
};

class WarpedS1S3 final : public ModelManifold {
 public:
  WarpedS1S3(double w, double sigma) : w_(w), sigma_(sigma), chart_(w, sigma) {
    name_ = "warped-s1xs3";
    params_["warp"] = w;
    params_["scale"] = sigma;
    // Ricci minimum is 3 K_mixed at chi = pi: -3w/(1-w) per sigma^2.
    lambda_ = (w > 0) ? std::sqrt(3.0 * w / (1.0 - w)) / sigma : 0.0;
  }

  bool compact() const override { return true; }
  bool homogeneous() const override { return w_ == 0.0; }
  double diameter() const override {
    return sigma_ * std::sqrt(kPi * kPi * (1.0 + w_) * (1.0 + w_) / 4.0 + kPi * kPi);
  }

  double mixed_sectional(double cos_chi) const {
    const double f = 1.0 + w_ * cos_chi;
    return w_ * cos_chi / (f * sigma_ * sigma_);
  }

  CurvatureTensor curvature_at(const ChartPoint& p) const override {
    const double ks = 1.0 / (sigma_ * sigma_);
    const double cos_chi = std::cos(chart_.chi(p.x));
    const double km = mixed_sectional(cos_chi);
    std::array<double, 256> c{};
    auto put = [&c](int a, int b, int cc, int d, double v) {
      c[((a * 4 + b) * 4 + cc) * 4 + d] = v;
    };
    // Round S^3 block and isotropic mixed block.
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          for (int l = 0; l < 3; ++l)
            put(i, j, k, l, ks * ((i == k && j == l ? 1.0 : 0.0) - (i == l && j == k ? 1.0 : 0.0)));
    for (int a = 0; a < 3; ++a) {
      put(a, 3, a, 3, km);
      put(3, a, 3, a, km);
      put(a, 3, 3, a, -km);
      put(3, a, a, 3, -km);
    }
    return CurvatureTensor::from_components_unchecked(c);
  }

  double curvature_norm_at(const ChartPoint& p) const override {
    const double ks = 1.0 / (sigma_ * sigma_);
    const double km = mixed_sectional(std::cos(chart_.chi(p.x)));
    return std::sqrt(12.0 * (ks * ks + km * km));
  }

  double distance(const ChartPoint& p, const ChartPoint& q) const override {
    const auto res = shoot_distance(chart_, p.x, q.x, 1e-8, 80);
    if (!res.converged) {
      throw NumericDomainError("models: geodesic shooting on " + name_ +
                               " did not converge (best endpoint miss " +
                               std::to_string(res.miss) + ")");
    }
    return res.distance;
  }

  bool cheap_distance() const override { return false; }

  std::pair<double, double> distance_bounds(const ChartPoint& p,
                                            const ChartPoint& q) const override {
    const double d3 = s3_distance(p.x, q.x);
    const double dth = std::abs(std::remainder(q.x(3) - p.x(3), 2 * kPi));
    const double lo = sigma_ * std::hypot(d3, (1.0 - w_) * dth);
    const double hi = sigma_ * std::hypot(d3, (1.0 + w_) * dth);
    return {lo, hi};
  }

  double ball_volume(const ChartPoint& p, double r) const override {
    return ball_domain(p, r, r / 10.0).volume();
  }

  double ball_curvature_sup(const ChartPoint& p, double r) const override {
    const double chi_p = chart_.chi(p.x);
    const double lo = std::max(0.0, chi_p - r / sigma_);
    const double hi = std::min(kPi, chi_p + r / sigma_);
    const double ks = 1.0 / (sigma_ * sigma_);
    double worst = 0.0;
    for (double chi : {lo, hi}) {
      const double km = mixed_sectional(std::cos(chi));
      worst = std::max(worst, 12.0 * (ks * ks + km * km));
    }
    return std::sqrt(worst);
  }

  double max_ball_radius(const ChartPoint& p) const override {
    const double margin = chart_.chart_margin(p.x);
    return std::min(0.98 * margin, 0.9 * kPi * sigma_ * (1.0 - w_));
  }

  SampledDomain ball_domain(const ChartPoint& p, double r, double resolution) const override {
    return polar_ball_domain(*this, chart_, p, r, resolution);
  }

  SampledDomain sample_domain(const RegionSpec& region, double res, uint64_t) const override {
    auto density = [this](const Vec4& x) {
      const double h = chart_.hfun(x), f = chart_.ffun(x);
      return std::pow(sigma_, 4) * h * h * h * f;
    };
    std::array<AxisGrid, 4> axes;
    switch (region.kind) {
      case RegionSpec::Kind::Full:
        throw ConfigError(
            "models: warped-s1xs3 chart omits the chi = pi pole; use a box region");
      case RegionSpec::Kind::Box: {
        for (int a = 0; a < 4; ++a) {
          const double len = region.hi(a) - region.lo(a);
          const double scale = (a < 3) ? sigma_ * 1.2 : sigma_;
          const int n = std::max(1, int(std::llround(len * scale / res)));
          axes[a] = {region.lo(a), len / n, n};
        }
        return grid_domain(name_, 4, axes, density, res, 0.02);
      }
      case RegionSpec::Kind::Ball:
        return ball_domain(region.center, region.radius, res);
    }
    throw ConfigError("models: unsupported region");
  }

  std::vector<KillingField> killing_fields() const override {
    const WarpedChart* chart = &chart_;
    KillingField f;
    f.name = "circle-rotation";
    f.eval = [chart](const ChartPoint& p) {
      const Vec4 v(0, 0, 0, 1);
      return killing_sample(*chart, v, Mat4::Zero(), p.x);
    };
    return {f};
  }

  const MetricChart* metric_chart() const override { return &chart_; }

 private:
  static double s3_distance(const Vec4& p, const Vec4& q) {
    auto embed = [](const Vec4& x) {
      const double u = 1.0 + x(0) * x(0) + x(1) * x(1) + x(2) * x(2);
      return Eigen::Vector4d(2 * x(0) / u, 2 * x(1) / u, 2 * x(2) / u,
                             (2.0 - u) / u);  // (1-|y|^2)/(1+|y|^2)
    };
    const double chord = (embed(p) - embed(q)).norm();
    return 2.0 * std::asin(clamp01(chord / 2.0));
  }

  double w_, sigma_;
  WarpedChart chart_;
};

// ---------------------------------------------------------------------------
// Conformal bump over flat R^4: g = e^{2u} delta with a compactly supported
// radial bump u.  Curvature comes from the finite-difference oracle.

constexpr double kBumpChartHalf = 4.0;

class BumpChart final : public MetricChart {
 public:
  BumpChart(double amplitude, double width) : amp_(amplitude), width_(width) {}

  double ufun(const Vec4& x) const {
    const double t2 = x.squaredNorm() / (width_ * width_);
    if (t2 >= 1.0) return 0.0;
    return amp_ * std::exp(1.0 - 1.0 / (1.0 - t2));
  }

  Mat4 metric(const Vec4& x) const override {
    const double e2u = std::exp(2.0 * ufun(x));
    return e2u * Mat4::Identity();
  }
  std::array<Mat4, 4> metric_derivative(const Vec4& x) const override {
    const double w2 = width_ * width_;
    const double t2 = x.squaredNorm() / w2;
    std::array<Mat4, 4> d;
    for (auto& m : d) m.setZero();
    if (t2 >= 1.0) return d;
    const double eta = std::exp(1.0 - 1.0 / (1.0 - t2));
    const double one = 1.0 - t2;
    // d_k u = amp * eta * (-2 x_k / w2) / one^2
    const double e2u = std::exp(2.0 * amp_ * eta);
    for (int k = 0; k < 4; ++k) {
      const double du = amp_ * eta * (-2.0 * x(k) / w2) / (one * one);
      d[k] = 2.0 * du * e2u * Mat4::Identity();
    }
    return d;
  }
  bool diagonal() const override { return true; }
  double chart_margin(const Vec4& x) const override {
    const double conf = std::exp(std::min(0.0, amp_));
    return conf * (kBumpChartHalf - x.lpNorm<Eigen::Infinity>());
  }

 private:
  double amp_, width_;
};

class BumpMetric final : public ModelManifold {
 public:
  BumpMetric(double amplitude, double width)
      : amp_(amplitude), width_(width), chart_(amplitude, width) {
    name_ = "bump";
    params_["amplitude"] = amplitude;
    params_["width"] = width;
    build_profiles();
  }

  bool compact() const override { return false; }
  bool homogeneous() const override { return false; }
  double diameter() const override { return kInf; }

  CurvatureTensor curvature_at(const ChartPoint& p) const override {
    if (chart_.chart_margin(p.x) < 8.0 * kOracleStep) {
      throw NumericDomainError("models: bump curvature stencil exceeds chart margin at |x|=" +
                               std::to_string(p.x.norm()));
    }
    return oracle_curvature(chart_, p.x, kOracleStep);
  }

  double curvature_norm_at(const ChartPoint& p) const override {
    return profile_value(p.x.norm());
  }

  double distance(const ChartPoint& p, const ChartPoint& q) const override {
    const auto res = shoot_distance(chart_, p.x, q.x, 1e-8, 80);
    if (!res.converged) {
      throw NumericDomainError("models: geodesic shooting on bump did not converge (best miss " +
                               std::to_string(res.miss) + ")");
    }
    return res.distance;
  }

  bool cheap_distance() const override { return false; }

  std::pair<double, double> distance_bounds(const ChartPoint& p,
                                            const ChartPoint& q) const override {
    // Conformal factor is pinched between exp(min(0,A)) and exp(max(0,A)).
    const double lo = std::exp(std::min(0.0, amp_)) * (q.x - p.x).norm();
    const double hi = std::exp(std::max(0.0, amp_)) * (q.x - p.x).norm();
    return {lo, hi};
  }

  double ball_volume(const ChartPoint& p, double r) const override {
    // Flat away from the bump support.
    if (p.x.norm() - r > width_ || amp_ == 0.0) return 0.5 * kPi * kPi * r * r * r * r;
    return ball_domain(p, r, r / 12.0).volume();
  }

  double ball_curvature_sup(const ChartPoint& p, double r) const override {
    const double reach = r * std::exp(-std::min(0.0, amp_));
    const double rho = p.x.norm();
    return profile_sup(std::max(0.0, rho - reach), rho + reach);
  }

  double max_ball_radius(const ChartPoint& p) const override {
    return 0.95 * chart_.chart_margin(p.x);
  }

  SampledDomain ball_domain(const ChartPoint& p, double r, double resolution) const override {
    return polar_ball_domain(*this, chart_, p, r, resolution);
  }

  SampledDomain sample_domain(const RegionSpec& region, double res, uint64_t) const override {
    auto density = [this](const Vec4& x) { return std::exp(4.0 * chart_.ufun(x)); };
    std::array<AxisGrid, 4> axes;
    switch (region.kind) {
      case RegionSpec::Kind::Full:
        throw ConfigError("models: bump is non-compact; use a box or ball region");
      case RegionSpec::Kind::Box: {
        for (int a = 0; a < 4; ++a) {
          const double len = region.hi(a) - region.lo(a);
          const int n = std::max(1, int(std::llround(len / res)));
          axes[a] = {region.lo(a), len / n, n};
        }
        return grid_domain(name_, 4, axes, density, res, 0.02);
      }
      case RegionSpec::Kind::Ball:
        return ball_domain(region.center, region.radius, res);
    }
    throw ConfigError("models: unsupported region");
  }

  const MetricChart* metric_chart() const override { return &chart_; }

 private:
  // The mollifier's high derivatives near the support edge make the
  // differencing truncation error ~ h^4 |eta^(5)|; 1e-3 keeps it under the
  // symmetrization tolerance there.
  static constexpr double kOracleStep = 5e-4;
  static constexpr int kProfileSize = 400;

  void build_profiles() {
    profile_.resize(kProfileSize + 1);
    profile_step_ = width_ / kProfileSize;
    double min_ric = 0.0;
    for (int i = 0; i <= kProfileSize; ++i) {
      const double rho = i * profile_step_;
      const Vec4 x(rho, 0, 0, 0);
      const CurvatureTensor rm = oracle_curvature(chart_, x, kOracleStep);
      profile_[i] = rm.norm();
      Mat4 ric = Mat4::Zero();
      for (int j = 0; j < 4; ++j)
        for (int l = 0; l < 4; ++l) {
          double s = 0;
          for (int k = 0; k < 4; ++k) s += rm.at(k, j, k, l);
          ric(j, l) = s;
        }
      const Eigen::SelfAdjointEigenSolver<Mat4> eig(ric);
      min_ric = std::min(min_ric, eig.eigenvalues().minCoeff());
    }
    lambda_ = std::sqrt(std::max(0.0, -min_ric)) * 1.0001;
  }

  double profile_value(double rho) const {
    if (rho >= width_) return 0.0;
    const double t = rho / profile_step_;
    const int i = std::min(kProfileSize - 1, int(t));
    const double frac = t - i;
    return profile_[i] * (1.0 - frac) + profile_[i + 1] * frac;
  }

  double profile_sup(double lo, double hi) const {
    if (lo >= width_) return 0.0;
    const int i0 = std::max(0, int(lo / profile_step_) - 1);
    const int i1 = std::min(kProfileSize, int(std::ceil(hi / profile_step_)) + 1);
    double m = 0.0;
    for (int i = i0; i <= i1; ++i) m = std::max(m, profile_[i]);
    return m;
  }

  double amp_, width_;
  BumpChart chart_;
  std::vector<double> profile_;
  double profile_step_ = 1.0;
};

// ---------------------------------------------------------------------------

double get_param(const std::map<std::string, double>& params, const std::string& key,
                 double fallback, bool required = false) {
  auto it = params.find(key);
  if (it == params.end()) {
    if (required) throw ConfigError("models: missing required parameter '" + key + "'");
    return fallback;
  }
  return it->second;
}

void check_keys(const std::string& model, const std::map<std::string, double>& params,
                const std::vector<std::string>& known) {
  for (const auto& [k, v] : params) {
    (void)v;
    if (std::find(known.begin(), known.end(), k) == known.end())
      throw ConfigError("models: unknown parameter '" + k + "' for model '" + model + "'");
  }
}

}  // namespace

std::unique_ptr<ModelManifold> make_model(const std::string& name,
                                          const std::map<std::string, double>& params) {
  if (name == "flat-torus") {
    check_keys(name, params, {"L1", "L2", "L3", "L4", "dim"});
    const int dim = int(get_param(params, "dim", 4));
    if (dim != 2 && dim != 4) throw ConfigError("models: flat-torus dim must be 2 or 4");
    std::vector<double> periods;
    for (int i = 1; i <= dim; ++i) {
      const double L = get_param(params, "L" + std::to_string(i), 1.0);
      if (L <= 0) throw ConfigError("models: flat-torus periods must be positive");
      periods.push_back(L);
    }
    return std::make_unique<FlatTorus>(periods);
  }
  if (name == "s4") {
    check_keys(name, params, {"radius"});
    const double rho = get_param(params, "radius", 1.0);
    if (rho <= 0) throw ConfigError("models: s4 radius must be positive");
    return std::make_unique<Sphere4>(rho);
  }
  if (name == "h4") {
    check_keys(name, params, {"radius"});
    const double rho = get_param(params, "radius", 1.0);
    if (rho <= 0) throw ConfigError("models: h4 radius must be positive");
    return std::make_unique<Hyperbolic4>(rho);
  }
  if (name == "s2xs2") {
    check_keys(name, params, {"a", "b"});
    const double a = get_param(params, "a", 1.0), b = get_param(params, "b", 1.0);
    if (a <= 0 || b <= 0) throw ConfigError("models: s2xs2 radii must be positive");
    return std::make_unique<ProductS2S2>(a, b);
  }
  if (name == "warped-s1xs3") {
    check_keys(name, params, {"warp", "scale"});
    const double w = get_param(params, "warp", 0.3);
    const double sigma = get_param(params, "scale", 1.0);
    if (w < 0 || w >= 0.9) throw ConfigError("models: warped-s1xs3 warp must be in [0, 0.9)");
    if (sigma <= 0) throw ConfigError("models: warped-s1xs3 scale must be positive");
    return std::make_unique<WarpedS1S3>(w, sigma);
  }
  if (name == "bump") {
    check_keys(name, params, {"amplitude", "width"});
    const double amp = get_param(params, "amplitude", 0.5);
    const double width = get_param(params, "width", 1.0);
    if (width <= 0 || width > 2.5) throw ConfigError("models: bump width must be in (0, 2.5]");
    if (std::abs(amp) > 2.0) throw ConfigError("models: bump amplitude must be in [-2, 2]");
    return std::make_unique<BumpMetric>(amp, width);
  }
  throw ConfigError("models: unknown model '" + name + "'");
}

std::vector<std::string> model_catalog() {
  return {"flat-torus", "s4", "h4", "s2xs2", "warped-s1xs3", "bump"};
}

}  // namespace curv4
