#pragma once

#include <mutex>
#include <unordered_map>
#include <vector>

#include "curv4/models.hpp"
#include "curv4/radius.hpp"

namespace curv4 {

/// Distance queries between sampled domain points, with memoization and
/// bound-based screening so geodesic-shooting models only shoot when a
/// threshold comparison genuinely needs it.
class DistanceOracle {
 public:
  DistanceOracle(const ModelManifold& m, const SampledDomain& domain);

  double exact(int i, int j) const;
  /// dist(i,j) < t and dist(i,j) <= t.
  bool less(int i, int j, double t) const;
  bool leq(int i, int j, double t) const;
  double lower_bound(int i, int j) const;
  std::size_t exact_evaluations() const { return exact_count_; }
  const SampledDomain& domain() const { return domain_; }
  const ModelManifold& model() const { return model_; }

 private:
  const ModelManifold& model_;
  const SampledDomain& domain_;
  bool cheap_;
  mutable std::unordered_map<std::uint64_t, double> memo_;
  mutable std::mutex mutex_;
  mutable std::size_t exact_count_ = 0;
};

/// Output of the covering construction: centers index into the domain the
/// cover was built over.
struct SeparatedCover {
  double k = 0.0, l = 0.0;
  double s = kInf;                // cutoff of the generating field, if any
  std::vector<int> centers;
  std::vector<double> radii;      // (l/k) * field value at the center
  std::vector<int> partition;     // 0 = P^R (r < s), 1 = P^s (r = s); empty without cutoff
  std::vector<int> multiplicity;  // covering-ball count per domain point
};

/// Greedy maximally (1/k) r_R-separated subset: points in decreasing field
/// order (ties by index), accepted when separated from all previous picks.
/// The result satisfies separation and maximality exactly with respect to
/// the sampled distance oracle.  `candidates` restricts the construction to
/// a subset of domain indices (default: all points).
std::vector<int> build_separated_subset(const DistanceOracle& dist,
                                        const std::vector<double>& field, double k,
                                        const std::vector<int>* candidates = nullptr);

struct CoverReport {
  SeparatedCover cover;
  double coverage_fraction = 0.0;
  int max_multiplicity = 0;
  double multiplicity_constant = 0.0;  // max multiplicity / k^dim
  bool half_radius_disjoint = true;
  std::size_t sandwich_violations = 0;
  double min_sandwich_margin = kInf;  // min over clusters of r_j - ((k-l)/(k+l)) r''
  bool coverage_guarantee = false;     // l > k/(k-1)
  bool multiplicity_guarantee = false; // l <= k/7
  std::vector<std::string> warnings;
};

CoverReport build_cover_and_verify(const DistanceOracle& dist, const std::vector<double>& field,
                                   const std::vector<int>& centers, double k, double l);

struct CutoffCoverReport {
  SeparatedCover cover;
  double coverage_fraction = 0.0;
  int max_multiplicity = 0;
  // Second covering stage over the part of the domain not covered by the
  // P^R balls, re-covered at the uniform scale (6/7)s.
  std::size_t stage2_centers = 0;
  double uncovered_rm_sup = 0.0;  // sup |Rm| over the (6/7)s-thickened uncovered set
  bool uncovered_rm_bound_ok = true;  // <= (49/36) s^-2
  // Containment of the cover in the sampled Omega^{R,(l/k)s}.
  bool containment_ok = true;
  std::size_t containment_checked = 0;
  std::vector<std::string> notes;
};

/// Covering with a cutoff field: builds the maximally separated cover for
/// r_R^s, partitions centers into P^R / P^s, verifies the curvature bound
/// on the thickened uncovered set, re-covers it at uniform scale, and
/// checks the containment of all cover balls in Omega^{R,(l/k)s}.
/// Requires k/(k-1) < l <= k/7.
CutoffCoverReport build_cutoff_cover(const ModelManifold& m, const SampledDomain& domain,
                                     const DistanceOracle& dist, const RadiusField& field,
                                     double k, double l, const RadiusOptions& ropts = {});

}  // namespace curv4
