#include "curv4/iteration.hpp"

#include <cmath>

#include "curv4/tensor4.hpp"

namespace curv4 {

IterationSchedule schedule(IterationCase kase, double lambda_or_r, int truncation) {
  if (!(lambda_or_r > 0)) throw ConfigError("iteration: scale parameter must be positive");
  if (truncation < 0) throw ConfigError("iteration: truncation must be non-negative");
  IterationSchedule s;
  s.kase = kase;
  s.truncation = truncation;
  const double q = std::pow(33.0 / 40.0, 0.25);
  double unit;
  if (kase == IterationCase::LargeRadius) {
    s.lambda = lambda_or_r;
    s.rho0 = 1.0 / s.lambda;
    unit = 1.0 / s.lambda;
  } else {
    s.r = lambda_or_r;
    s.rho0 = s.r / 100.0;
    unit = s.r / 25.0;
  }
  s.rho.push_back(s.rho0);
  double mu_hat = 1.0;
  for (int i = 0; i < truncation; ++i) {
    s.mu_hat.push_back(mu_hat);
    s.mu.push_back(unit * mu_hat);
    s.rho.push_back(s.rho.back() + s.mu.back());
    mu_hat *= q;
  }
  return s;
}

SeriesReport series_sums(const IterationSchedule& sched) {
  SeriesReport rep;
  const double q = std::pow(33.0 / 40.0, 0.25);
  const double ratio = (3.0 / 4.0) * std::pow(40.0 / 33.0, 1.0);  // = 10/11
  rep.weighted_sum_limit = 1.0 / (1.0 - ratio);                   // = 11
  rep.mu_hat_sum_limit = 1.0 / (1.0 - q);

  for (std::size_t i = 0; i < sched.mu_hat.size(); ++i) {
    const double direct = std::pow(0.75, double(i)) * std::pow(sched.mu_hat[i], -4.0);
    rep.identity_residual =
        std::max(rep.identity_residual, std::abs(direct - std::pow(10.0 / 11.0, double(i))));
    rep.weighted_sum += direct;
    rep.mu_hat_sum += sched.mu_hat[i];
  }
  const double T = double(sched.mu_hat.size());
  rep.weighted_sum_partial_closed = rep.weighted_sum_limit * (1.0 - std::pow(ratio, T));
  rep.mu_hat_sum_partial_closed = (1.0 - std::pow(q, T)) / (1.0 - q);

  const double unit =
      sched.kase == IterationCase::LargeRadius ? 1.0 / sched.lambda : sched.r / 25.0;
  rep.rho_limit = sched.rho0 + unit * rep.mu_hat_sum_limit;

  // Direct-summation oracle, independent of the closed form.
  double acc = 0.0, term = 1.0;
  while (term > 1e-18 * std::max(acc, 1.0)) {
    acc += term;
    term *= q;
  }
  rep.rho_limit_direct = sched.rho0 + unit * acc;
  return rep;
}

IterationTrace run_iteration(const ModelManifold& m, const ChartPoint& p,
                             const IterationSchedule& sched, double resolution_factor) {
  IterationTrace trace;
  const double unit =
      sched.kase == IterationCase::LargeRadius ? 1.0 / sched.lambda : 1.0;

  int effective = int(sched.mu.size());
  const double max_r = m.max_ball_radius(p);
  for (int i = 0; i + 1 < int(sched.rho.size()); ++i) {
    if (sched.rho[i + 1] > max_r) {
      effective = i;
      trace.truncated = true;
      break;
    }
  }
  trace.effective_truncation = effective;

  auto averages = [&](double rho) {
    const auto ball = m.ball_domain(p, rho, rho / resolution_factor);
    double vol = 0.0, e = 0.0, q = 0.0;
    for (std::size_t i = 0; i < ball.points.size(); ++i) {
      const double w = ball.weights[i];
      const auto norms = norms_and_identities(decompose(m.curvature_at(ball.points[i])));
      vol += w;
      e += w * norms.rm2;
      q += w * (norms.scalar2 / 3.0 + 4.0 * norms.wplus2);
    }
    return std::pair<double, double>{e / vol, q / vol};
  };

  std::vector<double> e_avg(effective + 1), q_avg(effective + 1);
  for (int i = 0; i <= effective; ++i) {
    const auto [e, q] = averages(sched.rho[i]);
    e_avg[i] = e;
    q_avg[i] = q;
  }

  for (int i = 0; i < effective; ++i) {
    IterationStep st;
    st.rho = sched.rho[i];
    st.mu = sched.mu[i];
    st.energy_avg = e_avg[i];
    st.q_avg = q_avg[i];
    const double slack = e_avg[i] - q_avg[i + 1] - 0.75 * e_avg[i + 1];
    const double scale = std::pow(unit, 4.0) * std::pow(sched.mu_hat[i], -4.0);
    st.step_constant = std::max(0.0, slack) / scale;
    trace.max_step_constant = std::max(trace.max_step_constant, st.step_constant);
    trace.steps.push_back(st);
  }
  if (effective < int(sched.rho.size())) {
    IterationStep last;
    last.rho = sched.rho[effective];
    last.energy_avg = e_avg[effective];
    last.q_avg = q_avg[effective];
    trace.steps.push_back(last);
  }
  trace.tail_bound = std::pow(0.75, double(effective)) * e_avg[effective];
  trace.tail_negligible = trace.tail_bound < 1e-6;
  return trace;
}

}  // namespace curv4
