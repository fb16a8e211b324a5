#include "curv4/cover.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "curv4/radius.hpp"

namespace curv4 {

DistanceOracle::DistanceOracle(const ModelManifold& m, const SampledDomain& domain)
    : model_(m), domain_(domain), cheap_(m.cheap_distance()) {}

double DistanceOracle::exact(int i, int j) const {
  if (i == j) return 0.0;
  if (cheap_) return model_.distance(domain_.points[i], domain_.points[j]);
  const std::uint64_t key =
      (std::uint64_t(std::min(i, j)) << 32) | std::uint64_t(std::max(i, j));
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
  }
  const double d = model_.distance(domain_.points[i], domain_.points[j]);
  std::lock_guard<std::mutex> lock(mutex_);
  memo_.emplace(key, d);
  ++exact_count_;
  return d;
}

bool DistanceOracle::less(int i, int j, double t) const {
  if (i == j) return 0.0 < t;
  if (!cheap_) {
    const auto [lo, up] = model_.distance_bounds(domain_.points[i], domain_.points[j]);
    if (up < t) return true;
    if (lo >= t) return false;
  }
  return exact(i, j) < t;
}

bool DistanceOracle::leq(int i, int j, double t) const {
  if (i == j) return 0.0 <= t;
  if (!cheap_) {
    const auto [lo, up] = model_.distance_bounds(domain_.points[i], domain_.points[j]);
    if (up <= t) return true;
    if (lo > t) return false;
  }
  return exact(i, j) <= t;
}

double DistanceOracle::lower_bound(int i, int j) const {
  if (i == j) return 0.0;
  if (!cheap_) return model_.distance_bounds(domain_.points[i], domain_.points[j]).first;
  return exact(i, j);
}

std::vector<int> build_separated_subset(const DistanceOracle& dist,
                                        const std::vector<double>& field, double k,
                                        const std::vector<int>* candidates) {
  if (!(k > 1.0)) throw ConfigError("cover: separation parameter k must exceed 1");
  std::vector<int> order;
  if (candidates) {
    order = *candidates;
  } else {
    order.resize(field.size());
    std::iota(order.begin(), order.end(), 0);
  }
  std::stable_sort(order.begin(), order.end(), [&field](int a, int b) {
    if (field[a] != field[b]) return field[a] > field[b];
    return a < b;
  });

  std::vector<int> centers;
  for (int cand : order) {
    bool separated = true;
    for (int c : centers) {
      const double threshold = std::max(field[cand], field[c]) / k;
      if (dist.less(cand, c, threshold)) {
        separated = false;
        break;
      }
    }
    if (separated) centers.push_back(cand);
  }
  return centers;
}

namespace {

// Covering centers per domain point; empty vector = uncovered.
std::vector<std::vector<int>> covering_lists(const DistanceOracle& dist,
                                             const std::vector<int>& centers,
                                             const std::vector<double>& radii) {
  const std::size_t n = dist.domain().points.size();
  std::vector<std::vector<int>> lists(n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t ci = 0; ci < centers.size(); ++ci)
      if (dist.leq(int(x), centers[ci], radii[ci])) lists[x].push_back(int(ci));
  return lists;
}

}  // namespace

CoverReport build_cover_and_verify(const DistanceOracle& dist, const std::vector<double>& field,
                                   const std::vector<int>& centers, double k, double l) {
  if (!(k > 1.0)) throw ConfigError("cover: separation parameter k must exceed 1");
  if (!(l > 0.0)) throw ConfigError("cover: cover parameter l must be positive");
  CoverReport rep;
  rep.cover.k = k;
  rep.cover.l = l;
  rep.cover.centers = centers;
  rep.coverage_guarantee = l > k / (k - 1.0);
  rep.multiplicity_guarantee = l <= k / 7.0;
  if (!rep.coverage_guarantee)
    rep.warnings.push_back("l <= k/(k-1): the covering guarantee does not apply");
  if (!rep.multiplicity_guarantee)
    rep.warnings.push_back("l > k/7: the multiplicity bound does not apply");

  rep.cover.radii.reserve(centers.size());
  for (int c : centers) rep.cover.radii.push_back((l / k) * field[c]);

  const auto lists = covering_lists(dist, centers, rep.cover.radii);
  const std::size_t n = lists.size();
  rep.cover.multiplicity.resize(n);
  std::size_t covered = 0;
  for (std::size_t x = 0; x < n; ++x) {
    rep.cover.multiplicity[x] = int(lists[x].size());
    if (!lists[x].empty()) ++covered;
    rep.max_multiplicity = std::max(rep.max_multiplicity, rep.cover.multiplicity[x]);
  }
  rep.coverage_fraction = n ? double(covered) / double(n) : 1.0;
  rep.multiplicity_constant =
      rep.max_multiplicity / std::pow(k, dist.domain().dimension);

  // Half-radius disjointness: dist >= (1/2k)(r_i + r_j) for center pairs.
  for (std::size_t a = 0; a < centers.size() && rep.half_radius_disjoint; ++a)
    for (std::size_t b = a + 1; b < centers.size(); ++b) {
      const double t = (field[centers[a]] + field[centers[b]]) / (2.0 * k);
      if (dist.less(centers[a], centers[b], t)) {
        rep.half_radius_disjoint = false;
        break;
      }
    }

  // Sandwich: within each cluster of covering balls, every center radius is
  // pinched between ((k-l)/(k+l)) r'' and r'' for the largest member r''.
  const double pinch = (k - l) / (k + l);
  for (std::size_t x = 0; x < n; ++x) {
    if (lists[x].size() < 2) continue;
    double rmax = 0.0;
    for (int ci : lists[x]) rmax = std::max(rmax, field[centers[ci]]);
    for (int ci : lists[x]) {
      const double rj = field[centers[ci]];
      rep.min_sandwich_margin = std::min(rep.min_sandwich_margin, rj - pinch * rmax);
      if (!(rj > pinch * rmax)) ++rep.sandwich_violations;
    }
  }
  return rep;
}

CutoffCoverReport build_cutoff_cover(const ModelManifold& m, const SampledDomain& domain,
                                     const DistanceOracle& dist, const RadiusField& field,
                                     double k, double l, const RadiusOptions& ropts) {
  if (!(l > k / (k - 1.0))) {
    throw ConfigError("cover: cutoff cover requires l > k/(k-1) strictly; got l = " +
                      std::to_string(l) + ", k/(k-1) = " + std::to_string(k / (k - 1.0)) +
                      (l == k / (k - 1.0) ? " (parameter pair sits exactly on the boundary)"
                                          : ""));
  }
  if (!(l <= k / 7.0)) {
    throw ConfigError("cover: cutoff cover requires l <= k/7; got l = " + std::to_string(l) +
                      ", k/7 = " + std::to_string(k / 7.0));
  }

  CutoffCoverReport rep;
  const double s = field.s;
  const auto centers = build_separated_subset(dist, field.values, k);
  rep.cover.k = k;
  rep.cover.l = l;
  rep.cover.s = s;
  rep.cover.centers = centers;
  for (int c : centers) rep.cover.radii.push_back((l / k) * field.values[c]);
  for (int c : centers)
    rep.cover.partition.push_back(field.values[c] >= s * (1.0 - 1e-12) ? 1 : 0);

  const std::size_t n = domain.points.size();

  // Omega' = points covered by the P^R balls alone.
  std::vector<char> covered_by_pr(n, 0);
  for (std::size_t ci = 0; ci < centers.size(); ++ci) {
    if (rep.cover.partition[ci] != 0) continue;
    for (std::size_t x = 0; x < n; ++x)
      if (!covered_by_pr[x] && dist.leq(int(x), centers[ci], rep.cover.radii[ci]))
        covered_by_pr[x] = 1;
  }
  std::vector<int> uncovered;
  for (std::size_t x = 0; x < n; ++x)
    if (!covered_by_pr[x]) uncovered.push_back(int(x));

  // Curvature must stay below (49/36) s^-2 on the (6/7)s-thickening of the
  // uncovered set.
  const double rm_bound = (49.0 / 36.0) / (s * s);
  for (std::size_t x = 0; x < n && !uncovered.empty(); ++x) {
    bool in_thickened = false;
    for (int u : uncovered)
      if (dist.leq(int(x), u, (6.0 / 7.0) * s)) {
        in_thickened = true;
        break;
      }
    if (in_thickened)
      rep.uncovered_rm_sup = std::max(rep.uncovered_rm_sup, m.curvature_norm_at(domain.points[x]));
  }
  rep.uncovered_rm_bound_ok = rep.uncovered_rm_sup <= rm_bound * (1.0 + 1e-9);

  // Stage 2: re-cover the uncovered set at the uniform scale (6/7)s.  The
  // separated-subset machinery runs with the constant field (6/7)s.
  if (!uncovered.empty()) {
    std::vector<double> constant_field(n, (6.0 / 7.0) * s);
    const auto stage2 = build_separated_subset(dist, constant_field, k, &uncovered);
    rep.stage2_centers = stage2.size();
    for (int c : stage2) {
      rep.cover.centers.push_back(c);
      rep.cover.radii.push_back((l / k) * field.values[c]);
      rep.cover.partition.push_back(1);
    }
  }

  // Coverage and multiplicity of the assembled cover.
  const auto lists = covering_lists(dist, rep.cover.centers, rep.cover.radii);
  rep.cover.multiplicity.resize(n);
  std::size_t covered = 0;
  for (std::size_t x = 0; x < n; ++x) {
    rep.cover.multiplicity[x] = int(lists[x].size());
    if (!lists[x].empty()) ++covered;
    rep.max_multiplicity = std::max(rep.max_multiplicity, rep.cover.multiplicity[x]);
  }
  rep.coverage_fraction = n ? double(covered) / double(n) : 1.0;

  // Containment: each covered point lies in the sampled Omega^{R,(l/k)s},
  // witnessed by its covering center and the (l/k)s-cutoff radius field.
  const RadiusField fine = radius_field(m, domain, (l / k) * s, ropts);
  for (std::size_t x = 0; x < n; ++x) {
    if (lists[x].empty()) continue;
    bool inside = false;
    for (int ci : lists[x]) {
      const int center = rep.cover.centers[ci];
      if (dist.less(int(x), center, fine.values[center] * (1.0 + 1e-9))) {
        inside = true;
        break;
      }
    }
    ++rep.containment_checked;
    if (!inside) rep.containment_ok = false;
  }
  if (!uncovered.empty())
    rep.notes.push_back("second covering stage used for " + std::to_string(uncovered.size()) +
                        " points at uniform scale (6/7)s");
  return rep;
}

}  // namespace curv4
