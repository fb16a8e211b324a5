#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "curv4/common.hpp"
#include "curv4/metric.hpp"
#include "curv4/tensor4.hpp"

namespace curv4 {

struct ChartPoint {
  int chart = 0;
  Vec4 x = Vec4::Zero();
};

struct RegionSpec {
  enum class Kind { Full, Box, Ball };
  Kind kind = Kind::Full;
  Vec4 lo = Vec4::Zero();
  Vec4 hi = Vec4::Zero();
  ChartPoint center;
  double radius = 0.0;

  static RegionSpec full() { return {}; }
  static RegionSpec box(const Vec4& lo, const Vec4& hi) {
    RegionSpec r;
    r.kind = Kind::Box;
    r.lo = lo;
    r.hi = hi;
    return r;
  }
  static RegionSpec ball(const ChartPoint& c, double radius) {
    RegionSpec r;
    r.kind = Kind::Ball;
    r.center = c;
    r.radius = radius;
    return r;
  }
};

/// Quadrature sample of a region: points with positive weights whose sum
/// approximates the region volume within quadrature_tol (relative).
struct SampledDomain {
  std::vector<ChartPoint> points;
  std::vector<double> weights;
  std::string model;
  int dimension = 4;
  double resolution = 0.0;
  double quadrature_tol = 0.01;

  double volume() const;
};

/// Killing field data at a point: chart components of v, the orthonormal
/// frame matrix of nabla v (skew for exact Killing fields), and |v|.
struct KillingSample {
  Vec4 v = Vec4::Zero();
  Mat4 grad = Mat4::Zero();
  double norm = 0.0;
};

struct KillingField {
  std::string name;
  std::function<KillingSample(const ChartPoint&)> eval;
};

/// An analytic model manifold: metric, curvature, distance, volume and
/// sampling oracles.  Immutable after construction; all members are safe to
/// call concurrently.
class ModelManifold {
 public:
  virtual ~ModelManifold() = default;

  const std::string& name() const { return name_; }
  int dimension() const { return dim_; }
  const std::map<std::string, double>& parameters() const { return params_; }
  /// Ricci lower-bound scale: Ric >= -lambda^2 everywhere on the model.
  double lambda() const { return lambda_; }

  virtual bool compact() const = 0;
  /// Curvature invariants constant over the model.
  virtual bool homogeneous() const = 0;
  virtual double diameter() const = 0;

  virtual CurvatureTensor curvature_at(const ChartPoint& p) const = 0;
  virtual double curvature_norm_at(const ChartPoint& p) const;
  virtual double distance(const ChartPoint& p, const ChartPoint& q) const = 0;
  virtual double ball_volume(const ChartPoint& p, double r) const = 0;
  /// sup of |Rm| over the metric ball B(p, r), via the model's sampled
  /// profile oracle (exact on constant-curvature models).
  virtual double ball_curvature_sup(const ChartPoint& p, double r) const = 0;
  virtual SampledDomain sample_domain(const RegionSpec& region, double resolution,
                                      uint64_t seed) const = 0;

  virtual std::vector<KillingField> killing_fields() const { return {}; }
  virtual const MetricChart* metric_chart() const { return nullptr; }

  /// Largest ball radius around p that volume/quadrature oracles support
  /// without leaving the chart or wrapping around the model.
  virtual double max_ball_radius(const ChartPoint&) const { return kInf; }

  /// Quadrature sample of the metric ball B(p, r).  Homogeneous models
  /// return the center with weight ball_volume(p, r) since every integrand
  /// this library integrates over balls is a curvature invariant.
  virtual SampledDomain ball_domain(const ChartPoint& p, double r, double resolution) const;

  /// True when distance() is a cheap closed form; false when it shoots
  /// geodesics and callers should screen with distance_bounds first.
  virtual bool cheap_distance() const { return true; }
  /// Conservative bounds: first <= dist(p,q) <= second.
  virtual std::pair<double, double> distance_bounds(const ChartPoint& p,
                                                    const ChartPoint& q) const {
    const double d = distance(p, q);
    return {d, d};
  }

 protected:
  std::string name_;
  int dim_ = 4;
  std::map<std::string, double> params_;
  double lambda_ = 0.0;
};

/// Catalog factory.  Known names: flat-torus (L1..L4, or L1,L2 with dim=2),
/// s4 (radius), h4 (radius), s2xs2 (a, b), warped-s1xs3 (warp, scale),
/// bump (amplitude, width).  Unknown names or parameters raise ConfigError.
std::unique_ptr<ModelManifold> make_model(const std::string& name,
                                          const std::map<std::string, double>& params);

std::vector<std::string> model_catalog();

/// Evaluates a Killing field given analytically in chart components:
/// grad(a,b) = <nabla_{E_b} v, E_a>, norm = |v|_g.
KillingSample killing_sample(const MetricChart& chart, const Vec4& v_chart, const Mat4& dv_chart,
                             const Vec4& x);

}  // namespace curv4
