#pragma once

#include <vector>

#include "curv4/models.hpp"

namespace curv4 {

enum class IterationCase { LargeRadius, SmallRadius };  // (i) and (ii)

/// Radii and step sequences of the iteration:
///   case (i):  rho_0 = 1/Lambda, mu_i = (33/40)^{i/4}, rho_{i+1} = rho_i + mu_i/Lambda
///   case (ii): rho_0 = r/100,    mu_i = r (33/40)^{i/4}/25, rho_{i+1} = rho_i + mu_i
struct IterationSchedule {
  IterationCase kase = IterationCase::LargeRadius;
  double lambda = 0.0;  // case (i) input
  double r = 0.0;       // case (ii) input
  double rho0 = 0.0;
  std::vector<double> mu;      // mu_0 .. mu_{T-1}, in length units
  std::vector<double> mu_hat;  // dimensionless (33/40)^{i/4}
  std::vector<double> rho;     // rho_0 .. rho_T
  int truncation = 0;
};

IterationSchedule schedule(IterationCase kase, double lambda_or_r, int truncation);

struct SeriesReport {
  // Partial sums over i < T of the dimensionless sequences, with their
  // geometric closed forms (the tail at practical T exceeds 1e-10, so the
  // arithmetic is checked against the partial closed forms and the limits
  // against the full ones).
  double weighted_sum = 0.0;                // sum (3/4)^i mu_hat_i^-4
  double weighted_sum_partial_closed = 0.0; // 11 (1 - (10/11)^T)
  double weighted_sum_limit = 0.0;          // 11
  double mu_hat_sum = 0.0;
  double mu_hat_sum_partial_closed = 0.0;   // (1 - q^T)/(1 - q), q = (33/40)^{1/4}
  double mu_hat_sum_limit = 0.0;            // 1/(1 - q)
  double rho_limit = 0.0;                   // closed form, in length units
  double rho_limit_direct = 0.0;            // direct summation to machine convergence
  // Largest deviation of (3/4)^i mu_hat_i^-4 from (10/11)^i over the schedule.
  double identity_residual = 0.0;
};

SeriesReport series_sums(const IterationSchedule& sched);

struct IterationStep {
  double rho = 0.0;
  double mu = 0.0;
  double energy_avg = 0.0;  // avg of |Rm|^2 over B(p, rho_i)
  double q_avg = 0.0;       // avg of (R^2/3 + 4|W+|^2) over B(p, rho_i)
  double step_constant = 0.0;
};

struct IterationTrace {
  std::vector<IterationStep> steps;
  int effective_truncation = 0;
  bool truncated = false;       // chart coverage cut the schedule short
  double tail_bound = 0.0;      // (3/4)^T * final energy average
  bool tail_negligible = false; // tail_bound < 1e-6
  double max_step_constant = 0.0;
};

/// Evaluates the averaged energies along the schedule and the measured
/// constant of each single-step inequality
///   E_i <= Q_{i+1} + C unit^4 mu_i^-4 + (3/4) E_{i+1}
/// where unit = 1/Lambda in case (i) and 1 in case (ii).
IterationTrace run_iteration(const ModelManifold& m, const ChartPoint& p,
                             const IterationSchedule& sched, double resolution_factor = 6.0);

}  // namespace curv4
