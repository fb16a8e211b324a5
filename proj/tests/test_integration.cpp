#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "curv4/integration.hpp"

using namespace curv4;

namespace {

double rel(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

// Omega = sub-box of the unit torus, ambient = full torus.
struct TorusSetup {
  std::unique_ptr<ModelManifold> model = make_model("flat-torus", {});
  SampledDomain ambient;
  std::vector<int> omega;
  TorusSetup(double res, double side) {
    ambient = model->sample_domain(RegionSpec::full(), res, 1);
    for (std::size_t i = 0; i < ambient.points.size(); ++i) {
      const Vec4& x = ambient.points[i].x;
      if (x.maxCoeff() < side) omega.push_back(int(i));
    }
  }
};

}  // namespace

TEST_CASE("thickened sets: containment chain and mu = 1 coincidence") {
  TorusSetup setup(0.125, 0.4);
  DistanceOracle dist(*setup.model, setup.ambient);
  const double s = 0.22;
  RadiusField field;
  field.s = s;
  field.values.assign(setup.omega.size(), s);  // flat: r^s = s

  const auto sets = thickened_sets(*setup.model, setup.ambient, setup.omega, field, s, 0.5, dist);

  auto subset = [](const std::vector<int>& a, const std::vector<int>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
  };
  CHECK(subset(sets.omega, sets.omega_muR_s));
  CHECK(subset(sets.omega_muR_s, sets.omega_R_s));
  CHECK(subset(sets.omega_R_s, sets.omega_s));
  CHECK(sets.omega_s.size() > sets.omega.size());

  const auto mu1 = thickened_sets(*setup.model, setup.ambient, setup.omega, field, s, 1.0, dist);
  CHECK(mu1.omega_muR_s == mu1.omega_R_s);

  // Omega^{mu R, s} is contained in Omega^{R, mu s}: with the mu s cutoff
  // field (still constant mu s here), the mu-scaled balls coincide.
  RadiusField fine;
  fine.s = 0.5 * s;
  fine.values.assign(setup.omega.size(), 0.5 * s);
  const auto scaled =
      thickened_sets(*setup.model, setup.ambient, setup.omega, fine, 0.5 * s, 1.0, dist);
  CHECK(subset(sets.omega_muR_s, scaled.omega_R_s));
}

TEST_CASE("s -> 0 shrinks the sampled thickening to Omega") {
  TorusSetup setup(0.2, 0.4);
  DistanceOracle dist(*setup.model, setup.ambient);
  RadiusField field;
  field.s = 1e-6;
  field.values.assign(setup.omega.size(), 1e-6);
  const auto sets =
      thickened_sets(*setup.model, setup.ambient, setup.omega, field, 1e-6, 1.0, dist);
  CHECK(sets.omega_s.size() == setup.omega.size());
}

TEST_CASE("integration report on the flat torus: volume term only") {
  TorusSetup setup(0.125, 0.5);
  DistanceOracle dist(*setup.model, setup.ambient);
  const double s = 0.25, k = 4.0;
  const auto field = radius_field(*setup.model,
                                  [&] {
                                    SampledDomain d = setup.ambient;
                                    d.points.clear();
                                    d.weights.clear();
                                    for (int i : setup.omega) {
                                      d.points.push_back(setup.ambient.points[i]);
                                      d.weights.push_back(setup.ambient.weights[i]);
                                    }
                                    return d;
                                  }(),
                                  s);

  const auto rep = integration_report(*setup.model, setup.ambient, setup.omega, field, k, s, 0.5,
                                      1.0, dist);
  CHECK(rel(rep.lhs, std::pow(s, -k) * rep.omega_volume) < 1e-12);
  CHECK(rep.energy_term == 0.0);
  CHECK(rep.energy_2s == 0.0);
  CHECK(!rep.c_defined);
  // Inequality holds with m >= Vol(Omega)/Vol(Omega^(mu s)).
  CHECK(rep.volume_term >= rep.lhs * (rep.omega_volume / rep.omega_mus_volume) * 0.999);
}

TEST_CASE("integration report on the round sphere: C_measured <= 1") {
  const auto s4 = make_model("s4", {{"radius", 1.0}});
  const auto ambient = s4->sample_domain(RegionSpec::full(), 0.35, 1);
  std::vector<int> omega(ambient.points.size());
  for (std::size_t i = 0; i < omega.size(); ++i) omega[i] = int(i);
  DistanceOracle dist(*s4, ambient);
  const double s = 10.0, k = 4.0;
  SampledDomain omega_dom = ambient;
  const auto field = radius_field(*s4, omega_dom, s);
  const auto rep = integration_report(*s4, ambient, omega, field, k, s, 1.0, 1.0, dist);

  // (r^s)^-4 = 24 = |Rm|^2 pointwise, Omega^{mu R,s} = the whole sphere.
  CHECK(rel(rep.lhs, 24.0 * rep.omega_volume) < 2e-3);
  CHECK(rel(rep.energy_term, 24.0 * rep.omega_volume) < 1e-9);
  CHECK(rep.c_defined);
  CHECK(rep.c_measured <= 1.0 + 0.05);
  CHECK(rep.c_measured > 0.8);
}

TEST_CASE("monotonicity of the lhs in the cutoff") {
  const auto bump = make_model("bump", {{"amplitude", 0.8}, {"width", 1.0}});
  const auto dom = bump->sample_domain(
      RegionSpec::box(Vec4(-1.0, -1.0, -0.2, -0.2), Vec4(1.0, 1.0, 0.2, 0.2)), 0.4, 1);
  double prev = kInf;
  for (double s : {0.3, 0.5, 0.8}) {
    const auto field = radius_field(*bump, dom, s);
    double lhs = 0.0;
    for (std::size_t i = 0; i < dom.points.size(); ++i)
      lhs += dom.weights[i] * std::pow(field.values[i], -4.0);
    CHECK(lhs <= prev * (1.0 + 1e-3));
    prev = lhs;
  }
}

TEST_CASE("cover decomposition: multiplicity-weighted identity and Lipschitz bound") {
  TorusSetup setup(1.0 / 14.0, 0.5);
  DistanceOracle dist(*setup.model, setup.ambient);
  const double s = 0.2, k_exp = 4.0;
  RadiusField field;
  field.s = s;
  field.values.assign(setup.omega.size(), s);

  const auto chk =
      cover_decomposition_check(setup.ambient, setup.omega, field, 16.0, 8.0 / 7.0, k_exp, dist);
  CHECK(chk.max_multiplicity >= 1);
  CHECK(rel(chk.per_ball_sum, chk.multiplicity_weighted) < 1e-12);
  CHECK(chk.per_ball_sum >= chk.direct * 0.999);          // coverage
  CHECK(chk.lipschitz_bound_sum >= chk.per_ball_sum * 0.999);  // per-ball bound
  CHECK(chk.per_ball_sum <= chk.direct * chk.max_multiplicity * 1.001);
}

TEST_CASE("full-radius variant: finite constant without the volume term") {
  const auto h4 = make_model("h4", {{"radius", 1.0}});
  const auto ambient = h4->sample_domain(
      RegionSpec::box(Vec4(-0.6, -0.6, -0.6, -0.6), Vec4(0.6, 0.6, 0.6, 0.6)), 0.25, 1);
  std::vector<int> omega;
  SampledDomain omega_dom = ambient;
  omega_dom.points.clear();
  omega_dom.weights.clear();
  for (std::size_t i = 0; i < ambient.points.size(); ++i)
    if (ambient.points[i].x.cwiseAbs().maxCoeff() < 0.3) {
      omega.push_back(int(i));
      omega_dom.points.push_back(ambient.points[i]);
      omega_dom.weights.push_back(ambient.weights[i]);
    }
  DistanceOracle dist(*h4, ambient);
  const double s = 10.0;  // far above the curvature scale: effectively the full radius
  const auto field = radius_field(*h4, omega_dom, s);
  const auto rep = integration_report(*h4, ambient, omega, field, 4.0, s, 1.0, 1.0, dist);
  CHECK(rep.c_defined);
  CHECK(std::isfinite(rep.c_full_radius));
  CHECK(rep.c_full_radius > 0.0);
  // (r^s)^-4 = |Rm|^2 pointwise here, so the constant is a volume ratio <= 1.
  CHECK(rep.c_full_radius <= 1.0 + 1e-6);
}

TEST_CASE("errors: empty domain and bad parameters") {
  TorusSetup setup(0.3, 0.4);
  DistanceOracle dist(*setup.model, setup.ambient);
  RadiusField field;
  field.s = 0.2;
  CHECK_THROWS_AS(integration_report(*setup.model, setup.ambient, {}, field, 4.0, 0.2, 0.5, 1.0,
                                     dist),
                  NumericDomainError);
  field.values.assign(setup.omega.size(), 0.2);
  CHECK_THROWS_AS(
      thickened_sets(*setup.model, setup.ambient, setup.omega, field, 0.2, 1.5, dist),
      NumericDomainError);
}

TEST_CASE("thickening past the chart raises on non-compact models") {
  const auto bump = make_model("bump", {{"amplitude", 0.5}, {"width", 1.0}});
  const auto dom = bump->sample_domain(
      RegionSpec::box(Vec4(-0.6, -0.6, -0.6, -0.6), Vec4(0.6, 0.6, 0.6, 0.6)), 0.4, 1);
  std::vector<int> omega(dom.points.size());
  for (std::size_t i = 0; i < omega.size(); ++i) omega[i] = int(i);
  DistanceOracle dist(*bump, dom);
  RadiusField field;
  field.s = 50.0;
  field.values.assign(omega.size(), 50.0);
  CHECK_THROWS_AS(thickened_sets(*bump, dom, omega, field, 50.0, 1.0, dist),
                  NumericDomainError);
}
