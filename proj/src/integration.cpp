#include "curv4/integration.hpp"

#include <cmath>

namespace curv4 {

namespace {

void check_thickening_coverage(const ModelManifold& m, const SampledDomain& ambient,
                               const std::vector<int>& omega, double reach) {
  if (m.compact()) return;
  const auto* chart = m.metric_chart();
  if (!chart) return;
  for (int i : omega) {
    if (chart->chart_margin(ambient.points[i].x) < reach)
      throw NumericDomainError("integration: thickening by " + std::to_string(reach) +
                               " exceeds chart coverage of " + m.name());
  }
}

}  // namespace

ThickenedSets thickened_sets(const ModelManifold& m, const SampledDomain& ambient,
                             const std::vector<int>& omega, const RadiusField& field_on_omega,
                             double s, double mu, const DistanceOracle& dist) {
  if (!(s > 0)) throw NumericDomainError("integration: thickening scale must be positive");
  if (!(mu > 0 && mu <= 1)) throw NumericDomainError("integration: mu must lie in (0, 1]");
  if (field_on_omega.values.size() != omega.size())
    throw NumericDomainError("integration: field/omega size mismatch");
  check_thickening_coverage(m, ambient, omega, s);

  ThickenedSets sets;
  sets.omega = omega;
  const std::size_t n = ambient.points.size();
  for (std::size_t x = 0; x < n; ++x) {
    bool in_s = false, in_rs = false, in_murs = false;
    for (std::size_t oi = 0; oi < omega.size(); ++oi) {
      const int p = omega[oi];
      const double r = field_on_omega.values[oi];
      if (!in_s && dist.less(int(x), p, s)) in_s = true;
      if (!in_rs && dist.less(int(x), p, r)) in_rs = true;
      if (!in_murs && dist.less(int(x), p, mu * r)) in_murs = true;
      if (in_s && in_rs && in_murs) break;
    }
    if (in_s) sets.omega_s.push_back(int(x));
    if (in_rs) sets.omega_R_s.push_back(int(x));
    if (in_murs) sets.omega_muR_s.push_back(int(x));
  }
  return sets;
}

IntegrationReport integration_report(const ModelManifold& model, const SampledDomain& ambient,
                                     const std::vector<int>& omega, const RadiusField& field,
                                     double exponent, double s, double mu, double m,
                                     const DistanceOracle& dist) {
  if (omega.empty()) throw NumericDomainError("integration: empty domain");
  if (!(exponent > 0)) throw NumericDomainError("integration: exponent must be positive");

  IntegrationReport rep;
  rep.exponent = exponent;
  rep.s = field.s;
  rep.mu = mu;
  rep.m = m;

  for (std::size_t oi = 0; oi < omega.size(); ++oi) {
    const double w = ambient.weights[omega[oi]];
    rep.omega_volume += w;
    rep.lhs += w * std::pow(field.values[oi], -exponent);
  }

  const ThickenedSets sets = thickened_sets(model, ambient, omega, field, mu * s, mu, dist);
  for (int x : sets.omega_s) rep.omega_mus_volume += ambient.weights[x];
  rep.volume_term = m * std::pow(field.s, -exponent) * rep.omega_mus_volume;

  for (int x : sets.omega_muR_s) {
    const double rm = model.curvature_norm_at(ambient.points[x]);
    rep.energy_term += ambient.weights[x] * std::pow(rm, exponent / 2.0);
  }

  // Curvature energy over the (2s)-thickening, recorded for the smallness
  // hypothesis (never enforced here).
  {
    const ThickenedSets wide = thickened_sets(model, ambient, omega, field, 2.0 * s, 1.0, dist);
    for (int x : wide.omega_s) {
      const double rm = model.curvature_norm_at(ambient.points[x]);
      rep.energy_2s += ambient.weights[x] * rm * rm;
    }
  }

  if (rep.energy_term > 1e-300) {
    rep.c_measured = (rep.lhs - rep.volume_term) / rep.energy_term;
    rep.c_full_radius = rep.lhs / rep.energy_term;
    rep.c_defined = true;
  }
  return rep;
}

CoverDecompositionCheck cover_decomposition_check(const SampledDomain& ambient,
                                                  const std::vector<int>& omega,
                                                  const RadiusField& field, double k_sep,
                                                  double l, double exponent,
                                                  const DistanceOracle& dist) {
  CoverDecompositionCheck chk;
  // Field values indexed by ambient position for the omega points.
  std::vector<double> full(ambient.points.size(), 0.0);
  for (std::size_t oi = 0; oi < omega.size(); ++oi) full[omega[oi]] = field.values[oi];

  const auto real_centers = build_separated_subset(dist, full, k_sep, &omega);

  std::vector<int> mult(ambient.points.size(), 0);
  for (int c : real_centers) {
    const double radius = (l / k_sep) * full[c];
    double ball_sum = 0.0, ball_vol = 0.0;
    for (std::size_t oi = 0; oi < omega.size(); ++oi) {
      const int x = omega[oi];
      if (dist.leq(x, c, radius)) {
        ++mult[x];
        const double w = ambient.weights[x];
        ball_sum += w * std::pow(field.values[oi], -exponent);
        ball_vol += w;
      }
    }
    chk.per_ball_sum += ball_sum;
    chk.lipschitz_bound_sum +=
        std::pow(1.0 - l / k_sep, -exponent) * std::pow(full[c], -exponent) * ball_vol;
  }

  for (std::size_t oi = 0; oi < omega.size(); ++oi) {
    const int x = omega[oi];
    const double w = ambient.weights[x];
    const double v = std::pow(field.values[oi], -exponent);
    chk.direct += w * v;
    chk.multiplicity_weighted += w * v * mult[x];
    chk.max_multiplicity = std::max(chk.max_multiplicity, mult[x]);
  }
  return chk;
}

}  // namespace curv4
