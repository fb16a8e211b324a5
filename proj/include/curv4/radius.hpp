#pragma once

#include <vector>

#include "curv4/models.hpp"

namespace curv4 {

struct RadiusOptions {
  double bisect_rel_tol = 1e-4;
  // Cutoffs at or below this scale are degenerate (returned as-is, flagged).
  double degenerate_scale = 0.0;
};

struct RadiusSample {
  double value = 0.0;
  bool degenerate = false;
};

/// Largest r in (0, s) with |Rm| < r^-2 on B(p, r), evaluated against the
/// model's ball-sup oracle by bisection.  s = +inf is replaced by the model
/// diameter on compact models and is an error on non-compact ones.
RadiusSample curvature_radius_sample(const ModelManifold& m, const ChartPoint& p, double s,
                                     const RadiusOptions& opts = {});
double curvature_radius(const ModelManifold& m, const ChartPoint& p, double s,
                        const RadiusOptions& opts = {});

struct RadiusField {
  double s = kInf;
  std::vector<double> values;
  std::vector<uint8_t> degenerate;
};

RadiusField radius_field(const ModelManifold& m, const SampledDomain& domain, double s,
                         const RadiusOptions& opts = {}, int threads = 1);

struct LipschitzReport {
  double max_ratio = 0.0;
  int pi = -1, pj = -1;  // the extremal pair
  std::size_t pairs = 0;
  std::size_t exact_distances = 0;
  bool violated(double tol = 0.05) const { return max_ratio > 1.0 + tol; }
};

/// Empirical Lipschitz constant of the field over all sampled pairs.  Uses
/// the model's distance bounds to avoid shooting geodesics for pairs that
/// cannot attain the maximum.
LipschitzReport lipschitz_report(const ModelManifold& m, const SampledDomain& domain,
                                 const RadiusField& field);

}  // namespace curv4
