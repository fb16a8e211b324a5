#pragma once

#include <array>
#include <memory>

#include "curv4/common.hpp"
#include "curv4/tensor4.hpp"

namespace curv4 {

/// A coordinate chart with an analytic metric and analytic first
/// derivatives.  Charts of dimension < 4 pad the unused slots with the
/// identity so the same linear algebra applies.
class MetricChart {
 public:
  virtual ~MetricChart() = default;

  virtual int dim() const { return 4; }
  virtual Mat4 metric(const Vec4& x) const = 0;
  /// d[mu](i,j) = d g_ij / d x^mu.
  virtual std::array<Mat4, 4> metric_derivative(const Vec4& x) const = 0;
  virtual bool diagonal() const { return false; }
  /// Conservative lower bound, in metric distance, on how far x is from the
  /// chart boundary.  +inf on charts that cover the whole model.
  virtual double chart_margin(const Vec4&) const { return kInf; }
  /// Normalizes periodic coordinates into their fundamental range.
  virtual Vec4 wrap(const Vec4& x) const { return x; }
  /// Shortest representative of the displacement q - p (periodic-aware).
  virtual Vec4 displacement(const Vec4& p, const Vec4& q) const { return q - p; }

  /// Gamma[k](i,j) = Christoffel symbol k_{ij}, from the analytic derivative.
  std::array<Mat4, 4> christoffels(const Vec4& x) const;

  /// Orthonormal frame: columns of the returned matrix are the frame vectors
  /// E_a in chart components (inverse-transpose Cholesky of the metric).
  Mat4 frame(const Vec4& x) const;
  /// Coframe: row a is theta^a; coframe(x) * frame(x) = Id.
  Mat4 coframe(const Vec4& x) const;
};

/// Orthonormal-frame curvature tensor by centered finite differences of the
/// (analytic) Christoffel symbols.  This is the independent oracle used to
/// check the closed-form model curvatures, and the production path for
/// models without closed forms.  4th-order stencils; `h` is the step in
/// chart coordinates.
CurvatureTensor oracle_curvature(const MetricChart& chart, const Vec4& x, double h = 1e-3,
                                 double symmetrize_tol = 1e-6);

/// Ricci tensor in the orthonormal frame, via oracle_curvature.
Mat4 oracle_ricci(const MetricChart& chart, const Vec4& x, double h = 1e-3);

struct GeodesicState {
  Vec4 x;
  Vec4 v;
};

/// RK4 integration of the geodesic equation for unit time with the given
/// initial velocity (so the curve length is |v|_g).
GeodesicState integrate_geodesic(const MetricChart& chart, const Vec4& x0, const Vec4& v0,
                                 int steps);

struct ShootingResult {
  double distance = 0.0;
  bool converged = false;
  double miss = kInf;  // chart-coordinate residual of the endpoint
  Vec4 velocity = Vec4::Zero();
};

/// Geodesic distance by shooting: solves exp_p(v) = q for v and returns
/// |v|_g.  tol is the endpoint tolerance in chart coordinates.
ShootingResult shoot_distance(const MetricChart& chart, const Vec4& p, const Vec4& q,
                              double tol = 1e-8, int steps = 96);

}  // namespace curv4
