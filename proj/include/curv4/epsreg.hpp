#pragma once

#include <string>

#include "curv4/models.hpp"
#include "curv4/radius.hpp"

namespace curv4 {

struct EpsRegOptions {
  double eps_working = 1e-2;      // working energy-smallness gate (configurable)
  double resolution_factor = 6.0; // ball quadrature resolution = r / factor
  double radius_cutoff = kInf;    // cutoff for r_R evaluations (diameter on compact models)
};

/// Instance evaluation of the regularity branches at (p, r).
struct RegularityReport {
  std::string model;
  double r = 0.0, lambda = 0.0, window = 0.0;  // window = K
  int branch = 0;                              // 1 = large radius, 2 = small radius
  std::string disjunct;                        // which disjunct held with the smaller constant
  bool disjunct_holds = false;

  double energy = 0.0;    // int_{B(p,r)} |Rm|^2
  double sup_half = 0.0;  // sup_{B(p, r/2)} |Rm|
  double avg_rm2 = 0.0;   // avg over B(p,r) of |Rm|^2
  double q_avg = 0.0;     // avg of (R^2/3 + 4|W+|^2) over the branch ball

  double c_sup = 0.0;        // sup |Rm| r^2 (branch 2) or sup |Rm| / Lambda^2 (branch 1)
  double q_threshold = 0.0;  // q_avg r^4 (branch 2) or q_avg / Lambda^4 (branch 1)
  double c_conclusion = 0.0; // sup^2 / q_avg
  double c_sup_ratio = 0.0;  // sup^2 / avg |Rm|^2, the branch (iii) constant

  bool low_energy_gate = false;  // avg |Rm|^2 r^4 <= eps_working
  double eps_working = 0.0;
};

RegularityReport classify(const ModelManifold& m, const ChartPoint& p, double r, double lambda,
                          double window, const EpsRegOptions& opts = {});

struct HarnackReport {
  double c_ratio = 0.0;       // sup_{B(r/2)} r_R^-4 / avg_{B(r)} r_R^-4
  double c_ratio_full = 0.0;  // sup_{B(r)} r_R^-4 / avg_{B(r)} r_R^-4 (always >= 1)
  double delta0 = 0.0;        // min_{B(r)} r_R / r_R(p)
  double min_max_ratio = 0.0; // min r_R / max r_R over the ball
};

HarnackReport harnack_probe(const ModelManifold& m, const ChartPoint& p, double r,
                            const EpsRegOptions& opts = {});

struct CollapseReport {
  double radius = 0.0;        // r_R(p) at the configured cutoff
  double volume = 0.0;        // Vol B(p, r_R(p))
  double volume_ratio = 0.0;  // volume / r_R^4
  double energy = 0.0;        // int_{B(p, 2 r_R)} |Rm|^2
  bool collapsed = false;     // volume_ratio <= tau
  double tau = 0.0;
  bool window_ok = true;      // r_R <= K / Lambda when Lambda > 0
  bool insufficient_sampling = false;
};

CollapseReport collapse_check(const ModelManifold& m, const ChartPoint& p, double lambda,
                              double window, double tau, const EpsRegOptions& opts = {});

struct VolumeComparisonReport {
  double annulus_ratio = 0.0;  // |A(rho-gamma, rho+beta)| / |B(rho)|
  double ball_ratio = 0.0;     // |B(rho+beta)| / |B(rho)|
  double bound = 0.0;          // (9/8)(1 + beta/rho)^4 cosh^3(lambda beta)
  bool in_window = true;       // lambda * beta <= 8
  bool pass = false;
};

VolumeComparisonReport volume_comparison_check(const ModelManifold& m, const ChartPoint& p,
                                               double rho, double beta, double gamma,
                                               double lambda, double tolerance = 1e-8);

}  // namespace curv4
