#include "curv4/radius.hpp"

#include <algorithm>
#include <cmath>

namespace curv4 {

RadiusSample curvature_radius_sample(const ModelManifold& m, const ChartPoint& p, double s,
                                     const RadiusOptions& opts) {
  if (!(s > 0)) throw NumericDomainError("radius: cutoff s must be positive");
  if (std::isinf(s)) {
    if (!m.compact())
      throw NumericDomainError("radius: infinite cutoff requires a compact model (" + m.name() +
                               " is not)");
    s = m.diameter();
  }
  if (s <= opts.degenerate_scale) return {s, true};

  auto admissible = [&](double r) { return m.ball_curvature_sup(p, r) * r * r < 1.0; };

  if (admissible(s)) return {s, false};  // cutoff binds

  // Find an admissible lower seed; |Rm|(p) sets the natural scale.
  const double rm_p = m.curvature_norm_at(p);
  double lo = (rm_p > 0) ? std::min(0.9 / std::sqrt(rm_p), 0.5 * s) : 0.5 * s;
  int guard = 0;
  while (!admissible(lo)) {
    lo *= 0.5;
    if (++guard > 200)
      throw NumericDomainError("radius: no admissible radius found at point (sup oracle "
                               "inconsistent)");
  }
  double hi = s;
  while ((hi - lo) > opts.bisect_rel_tol * lo) {
    const double mid = 0.5 * (lo + hi);
    if (admissible(mid))
      lo = mid;
    else
      hi = mid;
  }
  return {lo, false};
}

double curvature_radius(const ModelManifold& m, const ChartPoint& p, double s,
                        const RadiusOptions& opts) {
  return curvature_radius_sample(m, p, s, opts).value;
}

RadiusField radius_field(const ModelManifold& m, const SampledDomain& domain, double s,
                         const RadiusOptions& opts, int threads) {
  RadiusField f;
  f.s = std::isinf(s) && m.compact() ? m.diameter() : s;
  f.values.resize(domain.points.size());
  f.degenerate.resize(domain.points.size(), 0);
  parallel_for(domain.points.size(), threads, [&](std::size_t i) {
    const RadiusSample rs = curvature_radius_sample(m, domain.points[i], s, opts);
    f.values[i] = rs.value;
    f.degenerate[i] = rs.degenerate ? 1 : 0;
  });
  return f;
}

LipschitzReport lipschitz_report(const ModelManifold& m, const SampledDomain& domain,
                                 const RadiusField& field) {
  const std::size_t n = domain.points.size();
  LipschitzReport rep;
  if (n < 2) return rep;

  struct Cand {
    double potential;
    int i, j;
  };
  std::vector<Cand> needs_exact;

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dv = std::abs(field.values[i] - field.values[j]);
      ++rep.pairs;
      if (dv == 0.0) continue;
      const auto [lo, up] = m.distance_bounds(domain.points[i], domain.points[j]);
      if (up <= 1e-12) continue;  // coincident sample points
      // dv/up is a certified lower bound for the ratio, dv/lo an upper bound.
      const double sure = dv / up;
      if (sure > rep.max_ratio) {
        rep.max_ratio = sure;
        rep.pi = int(i);
        rep.pj = int(j);
      }
      if (lo > 0 && dv / lo > sure + 1e-15) needs_exact.push_back({dv / lo, int(i), int(j)});
    }

  if (m.cheap_distance()) {
    for (const auto& c : needs_exact) {
      const double d = m.distance(domain.points[c.i], domain.points[c.j]);
      if (d <= 1e-12) continue;
      const double ratio = std::abs(field.values[c.i] - field.values[c.j]) / d;
      ++rep.exact_distances;
      if (ratio > rep.max_ratio) {
        rep.max_ratio = ratio;
        rep.pi = c.i;
        rep.pj = c.j;
      }
    }
    return rep;
  }

  // Shooting models: resolve only pairs that could still beat the running
  // maximum, best potential first.
  std::sort(needs_exact.begin(), needs_exact.end(),
            [](const Cand& a, const Cand& b) { return a.potential > b.potential; });
  for (const auto& c : needs_exact) {
    if (c.potential <= rep.max_ratio) break;
    const double d = m.distance(domain.points[c.i], domain.points[c.j]);
    ++rep.exact_distances;
    if (d <= 1e-12) continue;
    const double ratio = std::abs(field.values[c.i] - field.values[c.j]) / d;
    if (ratio > rep.max_ratio) {
      rep.max_ratio = ratio;
      rep.pi = c.i;
      rep.pj = c.j;
    }
  }
  return rep;
}

}  // namespace curv4
