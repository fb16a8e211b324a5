#pragma once

#include <vector>

#include "curv4/cover.hpp"
#include "curv4/models.hpp"
#include "curv4/radius.hpp"

namespace curv4 {

/// Sampled realizations of the thickenings of a subregion Omega of an
/// ambient sampled domain.  All members are index lists into the ambient
/// domain's points.
struct ThickenedSets {
  std::vector<int> omega;
  std::vector<int> omega_s;      // { x : dist(x, Omega) < s }
  std::vector<int> omega_R_s;    // union of B(p, r^s(p)) over p in Omega
  std::vector<int> omega_muR_s;  // union of B(p, mu r^s(p)) over p in Omega
};

ThickenedSets thickened_sets(const ModelManifold& m, const SampledDomain& ambient,
                             const std::vector<int>& omega, const RadiusField& field_on_omega,
                             double s, double mu, const DistanceOracle& dist);

struct IntegrationReport {
  double lhs = 0.0;          // integral of (r^s)^-k over Omega
  double volume_term = 0.0;  // m s^-k Vol(Omega^(mu s))
  double energy_term = 0.0;  // integral of |Rm|^(k/2) over Omega^{mu R, s}
  double c_measured = 0.0;   // (lhs - volume_term) / energy_term
  bool c_defined = false;
  // Full-radius variant without the volume term: lhs / energy_term.
  double c_full_radius = 0.0;
  double exponent = 0.0, s = 0.0, mu = 0.0, m = 0.0;
  double omega_volume = 0.0, omega_mus_volume = 0.0;
  double energy_2s = 0.0;  // curvature energy on Omega^(2s), recorded alongside
};

/// Evaluates both sides of the integration inequality
///   int_Omega (r^s)^-k <= m s^-k Vol(Omega^(mu s)) + C int_{Omega^{mu R,s}} |Rm|^{k/2}
/// by quadrature over the ambient sample.
IntegrationReport integration_report(const ModelManifold& model, const SampledDomain& ambient,
                                     const std::vector<int>& omega, const RadiusField& field,
                                     double exponent, double s, double mu, double m,
                                     const DistanceOracle& dist);

/// Left-hand side recomputed through the covering decomposition: the sum of
/// per-ball integrals equals the multiplicity-weighted integral exactly, and
/// each ball obeys the Lipschitz bound (r^s >= (1 - l/k) r^s(center)).
struct CoverDecompositionCheck {
  double direct = 0.0;                // int_Omega (r^s)^-k
  double per_ball_sum = 0.0;          // sum_i int_{B_i cap Omega} (r^s)^-k
  double multiplicity_weighted = 0.0; // int_Omega mult(x) (r^s)^-k
  double lipschitz_bound_sum = 0.0;   // sum_i (1-l/k)^-k r_i^-k Vol(B_i cap Omega)
  int max_multiplicity = 0;
};

CoverDecompositionCheck cover_decomposition_check(const SampledDomain& ambient,
                                                  const std::vector<int>& omega,
                                                  const RadiusField& field, double k_sep,
                                                  double l, double exponent,
                                                  const DistanceOracle& dist);

}  // namespace curv4
