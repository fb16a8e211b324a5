#include "curv4/epsreg.hpp"

#include <cmath>

#include "curv4/tensor4.hpp"

namespace curv4 {

namespace {

struct BallAverages {
  double volume = 0.0;
  double rm2 = 0.0;  // averaged |Rm|^2
  double q = 0.0;    // averaged R^2/3 + 4|W+|^2
};

BallAverages ball_averages(const ModelManifold& m, const ChartPoint& p, double r,
                           double resolution_factor) {
  const auto ball = m.ball_domain(p, r, r / resolution_factor);
  BallAverages out;
  double e = 0.0, q = 0.0;
  for (std::size_t i = 0; i < ball.points.size(); ++i) {
    const double w = ball.weights[i];
    const auto norms = norms_and_identities(decompose(m.curvature_at(ball.points[i])));
    out.volume += w;
    e += w * norms.rm2;
    q += w * (norms.scalar2 / 3.0 + 4.0 * norms.wplus2);
  }
  out.rm2 = e / out.volume;
  out.q = q / out.volume;
  return out;
}

double radius_cutoff_for(const ModelManifold& m, const EpsRegOptions& opts) {
  if (!std::isinf(opts.radius_cutoff)) return opts.radius_cutoff;
  if (m.compact()) return m.diameter();
  throw NumericDomainError("epsreg: non-compact model " + m.name() +
                           " requires a finite radius_cutoff option");
}

}  // namespace

RegularityReport classify(const ModelManifold& m, const ChartPoint& p, double r, double lambda,
                          double window, const EpsRegOptions& opts) {
  if (!(r > 0)) throw NumericDomainError("epsreg: ball radius must be positive");
  if (r > m.max_ball_radius(p))
    throw NumericDomainError("epsreg: ball of radius " + std::to_string(r) +
                             " exceeds coverage of " + m.name());
  RegularityReport rep;
  rep.model = m.name();
  rep.r = r;
  rep.lambda = lambda;
  rep.window = window;
  rep.eps_working = opts.eps_working;

  const bool large_radius = lambda > 0 && r >= window / lambda;
  rep.branch = large_radius ? 1 : 2;

  const BallAverages full = ball_averages(m, p, r, opts.resolution_factor);
  rep.avg_rm2 = full.rm2;
  rep.energy = full.rm2 * full.volume;
  rep.sup_half = m.ball_curvature_sup(p, 0.5 * r);
  rep.low_energy_gate = full.rm2 * std::pow(r, 4) <= opts.eps_working;

  if (large_radius) {
    const BallAverages at_lambda = ball_averages(m, p, 1.0 / lambda, opts.resolution_factor);
    rep.q_avg = at_lambda.q;
    rep.c_sup = rep.sup_half / (lambda * lambda);
    rep.q_threshold = rep.q_avg / std::pow(lambda, 4);
  } else {
    rep.q_avg = full.q;
    rep.c_sup = rep.sup_half * r * r;
    rep.q_threshold = rep.q_avg * std::pow(r, 4);
  }
  rep.c_conclusion = rep.q_avg > 0 ? rep.sup_half * rep.sup_half / rep.q_avg : 0.0;
  rep.c_sup_ratio = rep.avg_rm2 > 0 ? rep.sup_half * rep.sup_half / rep.avg_rm2 : 0.0;

  const bool first = std::isfinite(rep.c_sup);
  const bool second = rep.q_threshold > 0 && std::isfinite(rep.c_conclusion);
  rep.disjunct_holds = first || second;
  if (first && (!second || rep.c_sup <= rep.c_conclusion))
    rep.disjunct = "sup-bound";
  else
    rep.disjunct = "energy-threshold";
  return rep;
}

HarnackReport harnack_probe(const ModelManifold& m, const ChartPoint& p, double r,
                            const EpsRegOptions& opts) {
  if (r > m.max_ball_radius(p))
    throw NumericDomainError("epsreg: probe ball exceeds coverage of " + m.name());
  const double s = radius_cutoff_for(m, opts);
  RadiusOptions ropts;

  const auto full = m.ball_domain(p, r, r / opts.resolution_factor);
  const auto half = m.ball_domain(p, 0.5 * r, 0.5 * r / opts.resolution_factor);

  const double rp = curvature_radius(m, p, s, ropts);

  double avg_inv4 = 0.0, vol = 0.0;
  double rmin = rp, rmax = rp;
  for (std::size_t i = 0; i < full.points.size(); ++i) {
    const double rr = curvature_radius(m, full.points[i], s, ropts);
    avg_inv4 += full.weights[i] * std::pow(rr, -4.0);
    vol += full.weights[i];
    rmin = std::min(rmin, rr);
    rmax = std::max(rmax, rr);
  }
  avg_inv4 /= vol;

  double sup_half_inv4 = std::pow(rp, -4.0);
  double sup_full_inv4 = std::pow(rmin, -4.0);
  for (std::size_t i = 0; i < half.points.size(); ++i) {
    const double rr = curvature_radius(m, half.points[i], s, ropts);
    sup_half_inv4 = std::max(sup_half_inv4, std::pow(rr, -4.0));
  }

  HarnackReport rep;
  rep.c_ratio = sup_half_inv4 / avg_inv4;
  rep.c_ratio_full = sup_full_inv4 / avg_inv4;
  rep.delta0 = rmin / rp;
  rep.min_max_ratio = rmin / rmax;
  return rep;
}

CollapseReport collapse_check(const ModelManifold& m, const ChartPoint& p, double lambda,
                              double window, double tau, const EpsRegOptions& opts) {
  CollapseReport rep;
  rep.tau = tau;
  const double s = radius_cutoff_for(m, opts);
  rep.radius = curvature_radius(m, p, s);
  rep.window_ok = lambda <= 0 || rep.radius <= window / lambda;
  rep.volume = m.ball_volume(p, rep.radius);
  rep.volume_ratio = rep.volume / std::pow(rep.radius, 4);
  rep.collapsed = rep.volume_ratio <= tau;

  const double r2 = std::min(2.0 * rep.radius, m.max_ball_radius(p));
  const auto ball = m.ball_domain(p, r2, r2 / opts.resolution_factor);
  rep.insufficient_sampling = !m.homogeneous() && ball.points.size() < 2;
  for (std::size_t i = 0; i < ball.points.size(); ++i) {
    const double rm = m.curvature_norm_at(ball.points[i]);
    rep.energy += ball.weights[i] * rm * rm;
  }
  return rep;
}

VolumeComparisonReport volume_comparison_check(const ModelManifold& m, const ChartPoint& p,
                                               double rho, double beta, double gamma,
                                               double lambda, double tolerance) {
  if (!(rho > 0) || !(beta > 0) || gamma < 0 || gamma >= rho)
    throw NumericDomainError("epsreg: volume comparison needs rho, beta > 0 and gamma in [0, rho)");
  VolumeComparisonReport rep;
  rep.in_window = lambda * beta <= 8.0;
  const double v_rho = m.ball_volume(p, rho);
  const double v_outer = m.ball_volume(p, rho + beta);
  const double v_inner = m.ball_volume(p, rho - gamma);
  rep.ball_ratio = v_outer / v_rho;
  rep.annulus_ratio = (v_outer - v_inner) / v_rho;
  const double c = std::cosh(lambda * beta);
  rep.bound = (9.0 / 8.0) * std::pow(1.0 + beta / rho, 4.0) * c * c * c;
  rep.pass = rep.annulus_ratio <= rep.ball_ratio * (1.0 + tolerance) &&
             rep.ball_ratio <= rep.bound * (1.0 + tolerance);
  return rep;
}

}  // namespace curv4
