#include <doctest.h>

#include <cmath>
#include <random>

#include "curv4/models.hpp"

using namespace curv4;

namespace {

double rel(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

ChartPoint cp(double a, double b, double c, double d) { return {0, Vec4(a, b, c, d)}; }

// Random interior chart points per model, away from coordinate singularities.
std::vector<ChartPoint> interior_points(const std::string& name, std::mt19937_64& rng, int count) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<ChartPoint> pts;
  for (int i = 0; i < count; ++i) {
    auto r = [&](double lo, double hi) { return lo + (hi - lo) * u(rng); };
    if (name == "s4")
      pts.push_back(cp(r(0.5, 2.6), r(0.5, 2.6), r(0.5, 2.6), r(0.3, 6.0)));
    else if (name == "h4")
      pts.push_back(cp(r(-1, 1), r(-1, 1), r(-1, 1), r(-1, 1)));
    else if (name == "s2xs2")
      pts.push_back(cp(r(0.5, 2.6), r(0.3, 6.0), r(0.5, 2.6), r(0.3, 6.0)));
    else if (name == "warped-s1xs3")
      pts.push_back(cp(r(-1.1, 1.1), r(-1.1, 1.1), r(-1.1, 1.1), r(0.3, 6.0)));
    else if (name == "bump")
      pts.push_back(cp(r(-1, 1), r(-1, 1), r(-1, 1), r(-1, 1)));
    else
      pts.push_back(cp(r(0, 1), r(0, 1), r(0, 1), r(0, 1)));
  }
  return pts;
}

}  // namespace

TEST_CASE("closed-form curvature agrees with the finite-difference oracle") {
  std::mt19937_64 rng(99);
  for (const auto& [name, params] :
       std::vector<std::pair<std::string, std::map<std::string, double>>>{
           {"flat-torus", {}},
           {"s4", {{"radius", 1.0}}},
           {"s4", {{"radius", 2.0}}},
           {"h4", {{"radius", 1.0}}},
           {"s2xs2", {{"a", 1.0}, {"b", 1.0}}},
           {"s2xs2", {{"a", 1.0}, {"b", 2.0}}},
           {"warped-s1xs3", {{"warp", 0.3}}},
           {"warped-s1xs3", {{"warp", 0.0}}},
           {"warped-s1xs3", {{"warp", 0.3}, {"scale", 2.0}}}}) {
    const auto model = make_model(name, params);
    const auto* chart = model->metric_chart();
    REQUIRE(chart != nullptr);
    for (const auto& p : interior_points(name, rng, 100)) {
      const CurvatureTensor closed = model->curvature_at(p);
      const CurvatureTensor fd = oracle_curvature(*chart, p.x);
      const double scale = std::max(closed.norm(), 1e-9);
      INFO(name << " at " << p.x.transpose());
      CHECK((closed - fd).norm() / scale < 1e-6);
      CHECK(std::abs(model->curvature_norm_at(p) - fd.norm()) < 1e-6 * scale);
    }
  }
}

TEST_CASE("bump curvature is the oracle, dips at the bump and vanishes outside") {
  const auto model = make_model("bump", {{"amplitude", 0.5}, {"width", 1.0}});
  CHECK(model->curvature_norm_at(cp(0, 0, 0, 0)) > 0.1);
  CHECK(model->curvature_norm_at(cp(1.5, 0, 0, 0)) == 0.0);
  // Profile agrees with a direct oracle evaluation off-axis (radial symmetry).
  const Vec4 x(0.3, 0.2, -0.1, 0.25);
  const double direct = oracle_curvature(*model->metric_chart(), x).norm();
  CHECK(rel(model->curvature_norm_at({0, x}), direct) < 2e-3);
}

TEST_CASE("decompose on oracle curvature: round sphere and product") {
  const auto s4 = make_model("s4", {{"radius", 1.0}});
  const auto dec = decompose(oracle_curvature(*s4->metric_chart(), Vec4(1.2, 1.4, 1.1, 2.0)));
  CHECK(rel(dec.scalar, 12.0) < 1e-7);
  CHECK(dec.ric0.norm() < 1e-7);
  CHECK(dec.wplus.norm() < 1e-7);
  CHECK(dec.wminus.norm() < 1e-7);

  const auto prod = make_model("s2xs2", {{"a", 1.0}, {"b", 1.0}});
  const auto dp = decompose(oracle_curvature(*prod->metric_chart(), Vec4(1.3, 0.7, 1.9, 2.2)));
  CHECK(rel(dp.scalar, 4.0) < 1e-7);
  CHECK(dp.ric0.norm() < 1e-7);
  CHECK(dp.wplus.norm() > 0.1);
  CHECK(rel(dp.wplus.norm(), dp.wminus.norm()) < 1e-7);
}

TEST_CASE("warped curvature block structure") {
  // f == 1 collapses to the product S^1 x S^3: only the S^3 block survives.
  const auto prod = make_model("warped-s1xs3", {{"warp", 0.0}});
  const auto rm = prod->curvature_at(cp(0.4, 0.1, -0.3, 1.0));
  CHECK(rm.at(0, 1, 0, 1) == doctest::Approx(1.0));
  for (int a = 0; a < 3; ++a) CHECK(rm.at(a, 3, a, 3) == 0.0);
}

TEST_CASE("distances: exact cases") {
  const auto t4 = make_model("flat-torus", {});
  CHECK(t4->distance(cp(0, 0, 0, 0), cp(0, 0, 0, 0)) == 0.0);
  CHECK(t4->distance(cp(0, 0, 0, 0), cp(0.5, 0, 0, 0)) == doctest::Approx(0.5));
  CHECK(t4->distance(cp(0.1, 0, 0, 0), cp(0.9, 0, 0, 0)) == doctest::Approx(0.2));

  const auto s4 = make_model("s4", {{"radius", 1.0}});
  const ChartPoint north = cp(0.0, 1.0, 1.0, 1.0);
  const ChartPoint south = cp(kPi, 1.0, 1.0, 1.0);
  CHECK(rel(s4->distance(north, south), kPi) < 1e-12);

  const auto h4 = make_model("h4", {{"radius", 1.0}});
  const ChartPoint o = cp(0, 0, 0, 0);
  const ChartPoint q = cp(std::sinh(1.0), 0, 0, 0);  // chart coord = sinh(dist)
  CHECK(rel(h4->distance(o, q), 1.0) < 1e-12);
}

TEST_CASE("triangle inequality on closed-form models") {
  std::mt19937_64 rng(7);
  for (const char* name : {"flat-torus", "s4", "h4", "s2xs2"}) {
    const auto m = make_model(name, name == std::string("s2xs2")
                                        ? std::map<std::string, double>{{"a", 1.0}, {"b", 2.0}}
                                        : std::map<std::string, double>{});
    for (int t = 0; t < 60; ++t) {
      auto pts = interior_points(name, rng, 3);
      const double dab = m->distance(pts[0], pts[1]);
      const double dbc = m->distance(pts[1], pts[2]);
      const double dac = m->distance(pts[0], pts[2]);
      CHECK(dac <= dab + dbc + 1e-8);
    }
  }
}

TEST_CASE("warped product distance: shooting matches the product closed form at warp 0") {
  const auto prod = make_model("warped-s1xs3", {{"warp", 0.0}});
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  std::uniform_real_distribution<double> th(0.0, 2 * kPi);
  for (int t = 0; t < 15; ++t) {
    const ChartPoint p = cp(u(rng), u(rng), u(rng), th(rng));
    const ChartPoint q = cp(p.x(0) + 0.3 * u(rng), p.x(1) + 0.3 * u(rng), p.x(2) + 0.3 * u(rng),
                            p.x(3) + 0.5 * u(rng));
    const auto [lo, hi] = prod->distance_bounds(p, q);
    CHECK(rel(lo, hi) < 1e-12);  // bounds coincide at warp 0
    const double d = prod->distance(p, q);
    CHECK(rel(d, lo) < 1e-5);
  }
}

TEST_CASE("warped distance bounds bracket the shot distance") {
  const auto m = make_model("warped-s1xs3", {{"warp", 0.3}});
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(-0.7, 0.7);
  for (int t = 0; t < 12; ++t) {
    const ChartPoint p = cp(u(rng), u(rng), u(rng), 1.0 + u(rng));
    const ChartPoint q = cp(u(rng), u(rng), u(rng), 1.0 + u(rng));
    const auto [lo, hi] = m->distance_bounds(p, q);
    const double d = m->distance(p, q);
    CHECK(d >= lo - 1e-7);
    CHECK(d <= hi + 1e-7);
  }
}

TEST_CASE("bump distance bounds and near-flat behavior") {
  const auto m = make_model("bump", {{"amplitude", 0.4}, {"width", 1.0}});
  const ChartPoint p = cp(-1.5, 0, 0, 0), q = cp(1.5, 0, 0, 0);
  const auto [lo, hi] = m->distance_bounds(p, q);
  const double d = m->distance(p, q);
  CHECK(d >= lo - 1e-7);
  CHECK(d <= hi + 1e-7);
  // Far from the bump the metric is flat.
  const double flat = m->distance(cp(2.0, 2.0, 0, 0), cp(2.5, 2.0, 0, 0));
  CHECK(rel(flat, 0.5) < 1e-6);
}

TEST_CASE("ball volumes: closed forms and asymptotics") {
  const auto t4 = make_model("flat-torus", {});
  CHECK(rel(t4->ball_volume(cp(0, 0, 0, 0), 0.3), 0.5 * kPi * kPi * 0.3 * 0.3 * 0.3 * 0.3) <
        1e-12);
  CHECK(rel(t4->ball_volume(cp(0, 0, 0, 0), 1.1), 1.0) < 1e-12);  // whole torus

  // Mid-range branch is continuous against the exact branches.
  const double at_half = t4->ball_volume(cp(0, 0, 0, 0), 0.4999);
  const double above_half = t4->ball_volume(cp(0, 0, 0, 0), 0.5001);
  CHECK(rel(above_half, at_half) < 1e-2);
  CHECK(above_half >= at_half);

  const auto collapsed = make_model("flat-torus", {{"L1", 0.01}});
  CHECK(rel(collapsed->ball_volume(cp(0, 0, 0, 0), 1.0), 0.01) < 1e-12);

  const auto h4 = make_model("h4", {{"radius", 1.0}});
  // Oracle: Simpson quadrature of the rotationally symmetric volume element.
  auto h4_vol = [](double r) {
    const int n = 4000;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const double t = (i + 0.5) * r / n;
      acc += std::pow(std::sinh(t), 3);
    }
    return 2.0 * kPi * kPi * acc * (r / n);
  };
  for (double r : {0.3, 0.7, 1.5}) CHECK(rel(h4->ball_volume(cp(0, 0, 0, 0), r), h4_vol(r)) < 1e-6);

  const auto s4 = make_model("s4", {{"radius", 1.0}});
  CHECK(rel(s4->ball_volume(cp(0, 0, 0, 0), kPi), 8.0 * kPi * kPi / 3.0) < 1e-12);

  // r -> 0: ratio to the Euclidean ball tends to 1.
  for (const auto* m : {s4.get(), h4.get()}) {
    const double r = 1e-3;
    CHECK(rel(m->ball_volume(cp(0.8, 0.8, 0.8, 0.8), r), 0.5 * kPi * kPi * r * r * r * r) < 1e-5);
  }
}

TEST_CASE("ball volume monotonicity in r below the diameter") {
  for (const char* name : {"flat-torus", "s4", "h4", "s2xs2"}) {
    const auto m = make_model(name, {});
    const double rmax = std::min(m->diameter(), 1.4) * 0.95;
    double prev = 0.0;
    for (double r = 0.1; r < rmax; r += 0.1) {
      const double v = m->ball_volume(cp(0.9, 0.9, 0.9, 0.9), r);
      CHECK(v > prev);
      prev = v;
    }
  }
}

TEST_CASE("polar ball quadrature against the product closed form") {
  const auto prod = make_model("warped-s1xs3", {{"warp", 0.0}});
  const ChartPoint p = cp(0.2, 0.1, -0.1, 1.0);
  const double r = 0.6;
  // Oracle: product-space ball volume, integrating S^3 caps over the circle.
  const int n = 2000;
  double want = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = -r + (i + 0.5) * (2 * r / n);
    const double q = std::sqrt(std::max(0.0, r * r - t * t));
    want += 2 * kPi * (q - std::sin(q) * std::cos(q)) * (2 * r / n);
  }
  const double got = prod->ball_volume(p, r);
  CHECK(rel(got, want) < 0.04);
}

TEST_CASE("sample domains: weights sum to region volumes") {
  const auto t4 = make_model("flat-torus", {});
  const auto dt = t4->sample_domain(RegionSpec::full(), 0.11, 1);
  CHECK(rel(dt.volume(), 1.0) < 1e-9);

  const auto s4 = make_model("s4", {{"radius", 1.0}});
  const auto ds = s4->sample_domain(RegionSpec::full(), 0.12, 1);
  CHECK(ds.points.size() > 50000);
  CHECK(rel(ds.volume(), 8.0 * kPi * kPi / 3.0) < 0.005);

  const auto prod = make_model("s2xs2", {});
  const auto dp = prod->sample_domain(RegionSpec::full(), 0.2, 1);
  CHECK(rel(dp.volume(), 16.0 * kPi * kPi) < 0.01);

  // Single-point domain: resolution coarser than the region.
  const auto single = t4->sample_domain(
      RegionSpec::box(Vec4(0, 0, 0, 0), Vec4(0.05, 0.05, 0.05, 0.05)), 0.5, 1);
  CHECK(single.points.size() == 1);
  CHECK(rel(single.volume(), std::pow(0.05, 4)) < 1e-12);
}

TEST_CASE("killing fields satisfy the Killing equation and are polarized") {
  std::mt19937_64 rng(31);
  const auto t4 = make_model("flat-torus", {});
  for (const auto& f : t4->killing_fields()) {
    const auto ks = f.eval(cp(0.3, 0.4, 0.5, 0.6));
    CHECK(ks.grad.norm() == 0.0);
    CHECK(ks.norm == 1.0);
  }

  const auto warped = make_model("warped-s1xs3", {{"warp", 0.3}});
  const auto fields = warped->killing_fields();
  REQUIRE(fields.size() == 1);
  for (const auto& p : interior_points("warped-s1xs3", rng, 20)) {
    const auto ks = fields[0].eval(p);
    const Mat4 sym = 0.5 * (ks.grad + ks.grad.transpose());
    CHECK(sym.norm() <= 1e-8 * std::max(1.0, ks.grad.norm()));
    CHECK(ks.norm >= 0.7);  // 1 - w
    CHECK(ks.norm <= 1.3);  // 1 + w
  }
  // Nontrivial rotation: the gradient is nonzero away from the poles.
  const auto ks = fields[0].eval(cp(0.8, 0, 0, 1.0));
  CHECK(ks.grad.norm() > 0.05);
}

TEST_CASE("declared Ricci lower bound holds at sampled points") {
  std::mt19937_64 rng(17);
  for (const auto& [name, params] :
       std::vector<std::pair<std::string, std::map<std::string, double>>>{
           {"h4", {{"radius", 1.0}}},
           {"warped-s1xs3", {{"warp", 0.3}}},
           {"bump", {{"amplitude", 0.5}, {"width", 1.0}}}}) {
    const auto m = make_model(name, params);
    const double bound = -m->lambda() * m->lambda();
    for (const auto& p : interior_points(name, rng, 10)) {
      const Mat4 ric = oracle_ricci(*m->metric_chart(), p.x);
      const Eigen::SelfAdjointEigenSolver<Mat4> eig(ric);
      CHECK(eig.eigenvalues().minCoeff() >= bound - 1e-6 - 1e-6 * std::abs(bound));
    }
  }
}

TEST_CASE("chart coverage violations raise numeric-domain errors") {
  const auto bump = make_model("bump", {{"amplitude", 0.5}, {"width", 1.0}});
  CHECK_THROWS_AS(bump->ball_domain(cp(0, 0, 0, 0), 50.0, 1.0), NumericDomainError);
  CHECK_THROWS_AS(bump->curvature_at(cp(3.9999, 0, 0, 0)), NumericDomainError);
}

TEST_CASE("factory validation") {
  CHECK_THROWS_AS(make_model("nope", {}), ConfigError);
  CHECK_THROWS_AS(make_model("s4", {{"radius", -1.0}}), ConfigError);
  CHECK_THROWS_AS(make_model("s4", {{"bogus", 1.0}}), ConfigError);
  CHECK_THROWS_AS(make_model("warped-s1xs3", {{"warp", 0.95}}), ConfigError);
}
