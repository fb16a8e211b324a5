#include "curv4/scenario.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

#include "curv4/cover.hpp"
#include "curv4/epsreg.hpp"
#include "curv4/integration.hpp"
#include "curv4/iteration.hpp"
#include "curv4/models.hpp"
#include "curv4/radius.hpp"
#include "curv4/report.hpp"
#include "curv4/tensor4.hpp"
#include "curv4/transgression.hpp"

namespace curv4 {

namespace {

using nlohmann::json;

[[noreturn]] void config_fail(const std::string& path, const std::string& what) {
  throw ConfigError("scenario: " + what + " at '" + path + "'");
}

void check_object(const json& j, const std::string& path, const std::vector<std::string>& allowed,
                  const std::vector<std::string>& required) {
  if (!j.is_object()) config_fail(path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    bool known = false;
    for (const auto& a : allowed)
      if (key == a) known = true;
    if (!known) config_fail(path + "." + key, "unknown key");
  }
  for (const auto& r : required)
    if (!j.contains(r)) config_fail(path + "." + r, "missing required key");
}

double get_number(const json& j, const std::string& path, const std::string& key) {
  if (!j.contains(key) || !j[key].is_number()) config_fail(path + "." + key, "expected a number");
  return j[key].get<double>();
}

double get_number_or(const json& j, const std::string& key, double fallback) {
  return j.contains(key) ? j[key].get<double>() : fallback;
}

Vec4 get_vec4(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() > 4) config_fail(path, "expected an array of up to 4 numbers");
  Vec4 v = Vec4::Zero();
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) config_fail(path, "expected numeric entries");
    v(i) = j[i].get<double>();
  }
  return v;
}

RegionSpec parse_region(const json& j, const std::string& path) {
  if (j.is_string()) {
    if (j.get<std::string>() == "full") return RegionSpec::full();
    config_fail(path, "unknown region name '" + j.get<std::string>() + "'");
  }
  check_object(j, path, {"box", "ball"}, {});
  if (j.contains("box")) {
    const json& b = j["box"];
    check_object(b, path + ".box", {"lo", "hi"}, {"lo", "hi"});
    return RegionSpec::box(get_vec4(b["lo"], path + ".box.lo"), get_vec4(b["hi"], path + ".box.hi"));
  }
  if (j.contains("ball")) {
    const json& b = j["ball"];
    check_object(b, path + ".ball", {"center", "radius"}, {"center", "radius"});
    return RegionSpec::ball({0, get_vec4(b["center"], path + ".ball.center")},
                            get_number(b, path + ".ball", "radius"));
  }
  config_fail(path, "region needs 'box', 'ball', or \"full\"");
}

std::unique_ptr<ModelManifold> parse_model(const json& j) {
  check_object(j, "model", {"name", "params"}, {"name"});
  if (!j["name"].is_string()) config_fail("model.name", "expected a string");
  std::map<std::string, double> params;
  if (j.contains("params")) {
    if (!j["params"].is_object()) config_fail("model.params", "expected an object");
    for (const auto& [key, value] : j["params"].items()) {
      if (!value.is_number()) config_fail("model.params." + key, "expected a number");
      params[key] = value.get<double>();
    }
  }
  return make_model(j["name"].get<std::string>(), params);
}

std::string out_path(const ScenarioOptions& opts, const json& output) {
  return opts.out_dir + "/" + output["path"].get<std::string>();
}

json classify_json(const RegularityReport& r) {
  return json{{"model", r.model},
              {"r", r.r},
              {"lambda", r.lambda},
              {"window", r.window},
              {"branch", r.branch},
              {"disjunct", r.disjunct},
              {"disjunct_holds", r.disjunct_holds},
              {"energy", r.energy},
              {"sup_half", r.sup_half},
              {"avg_rm2", r.avg_rm2},
              {"q_avg", r.q_avg},
              {"c_sup", r.c_sup},
              {"q_threshold", r.q_threshold},
              {"c_conclusion", r.c_conclusion},
              {"c_sup_ratio", r.c_sup_ratio},
              {"low_energy_gate", r.low_energy_gate},
              {"eps_working", r.eps_working}};
}

json harnack_json(const HarnackReport& r) {
  return json{{"c_ratio", r.c_ratio},
              {"c_ratio_full", r.c_ratio_full},
              {"delta0", r.delta0},
              {"min_max_ratio", r.min_max_ratio}};
}

// ---------------------------------------------------------------------------

std::string task_decompose(const json& task, std::uint64_t seed, const ScenarioOptions& opts,
                           const json& output) {
  check_object(task, "task", {"type", "count"}, {"count"});
  const int count = int(get_number(task, "task", "count"));
  if (count < 1 || count > 1000000) config_fail("task.count", "count out of range [1, 1e6]");
  std::mt19937_64 rng(seed);
  CsvTable csv;
  csv.header = {"index",  "rm2",          "scalar2",          "ric02",
                "wplus2", "wminus2",      "identity_residual", "energy_residual"};
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    const auto rm = random_curvature_tensor(rng);
    const auto norms = norms_and_identities(decompose(rm));
    const auto cd = characteristic_densities(decompose(rm));
    worst = std::max(worst, std::abs(norms.identity_residual) / std::max(norms.rm2, 1e-300));
    csv.rows.push_back({std::to_string(i), format_double(norms.rm2), format_double(norms.scalar2),
                        format_double(norms.ric02), format_double(norms.wplus2),
                        format_double(norms.wminus2), format_double(norms.identity_residual),
                        format_double(cd.energy_identity_residual)});
  }
  atomic_write(out_path(opts, output), csv.serialize());
  return "decompose: " + std::to_string(count) +
         " tensors, worst identity residual " + format_double(worst);
}

std::string task_radius_field(const ModelManifold& model, const SampledDomain& domain,
                              const json& task, const ScenarioOptions& opts, const json& output) {
  check_object(task, "task", {"type", "s"}, {"s"});
  const double s = get_number(task, "task", "s");
  const auto field = radius_field(model, domain, s, {}, opts.threads);
  CsvTable csv;
  csv.header = {"x0", "x1", "x2", "x3", "value", "degenerate"};
  for (std::size_t i = 0; i < domain.points.size(); ++i)
    csv.rows.push_back({format_double(domain.points[i].x(0)), format_double(domain.points[i].x(1)),
                        format_double(domain.points[i].x(2)), format_double(domain.points[i].x(3)),
                        format_double(field.values[i]), std::to_string(int(field.degenerate[i]))});
  atomic_write(out_path(opts, output), csv.serialize());
  const auto lip = lipschitz_report(model, domain, field);
  return "radius-field: " + std::to_string(domain.points.size()) +
         " points, empirical Lipschitz constant " + format_double(lip.max_ratio);
}

std::string task_cover(const ModelManifold& model, const SampledDomain& domain, const json& task,
                       const ScenarioOptions& opts, const json& output) {
  check_object(task, "task", {"type", "s", "k", "l", "cutoff"}, {"s", "k", "l"});
  const double s = get_number(task, "task", "s");
  const double k = get_number(task, "task", "k");
  const double l = get_number(task, "task", "l");
  const bool cutoff = task.contains("cutoff") && task["cutoff"].get<bool>();

  DistanceOracle dist(model, domain);
  const auto field = radius_field(model, domain, s, {}, opts.threads);

  SeparatedCover cover;
  std::string summary;
  if (cutoff) {
    const auto rep = build_cutoff_cover(model, domain, dist, field, k, l);
    cover = rep.cover;
    summary = "cutoff cover: " + std::to_string(cover.centers.size()) + " centers, coverage " +
              format_double(rep.coverage_fraction) + ", max multiplicity " +
              std::to_string(rep.max_multiplicity);
  } else {
    const auto centers = build_separated_subset(dist, field.values, k);
    const auto rep = build_cover_and_verify(dist, field.values, centers, k, l);
    cover = rep.cover;
    for (std::size_t i = 0; i < cover.centers.size(); ++i) cover.partition.push_back(-1);
    summary = "cover: " + std::to_string(cover.centers.size()) + " centers, coverage " +
              format_double(rep.coverage_fraction) + ", max multiplicity " +
              std::to_string(rep.max_multiplicity);
  }

  CsvTable csv;
  csv.header = {"x0", "x1", "x2", "x3", "r_value", "radius", "partition"};
  for (std::size_t i = 0; i < cover.centers.size(); ++i) {
    const ChartPoint& p = domain.points[cover.centers[i]];
    csv.rows.push_back({format_double(p.x(0)), format_double(p.x(1)), format_double(p.x(2)),
                        format_double(p.x(3)), format_double(field.values[cover.centers[i]]),
                        format_double(cover.radii[i]), std::to_string(cover.partition[i])});
  }
  atomic_write(out_path(opts, output), csv.serialize());
  return summary;
}

std::string task_integration(const ModelManifold& model, const SampledDomain& ambient,
                             const json& task, const ScenarioOptions& opts, const json& output) {
  check_object(task, "task", {"type", "s", "mu", "exponent", "m", "omega"}, {"s", "mu", "exponent", "omega"});
  const double s = get_number(task, "task", "s");
  const double mu = get_number(task, "task", "mu");
  const double exponent = get_number(task, "task", "exponent");
  const RegionSpec omega_region = parse_region(task["omega"], "task.omega");

  std::vector<int> omega;
  for (std::size_t i = 0; i < ambient.points.size(); ++i) {
    const ChartPoint& p = ambient.points[i];
    bool inside = false;
    switch (omega_region.kind) {
      case RegionSpec::Kind::Full:
        inside = true;
        break;
      case RegionSpec::Kind::Box: {
        inside = true;
        for (int a = 0; a < ambient.dimension; ++a)
          if (p.x(a) < omega_region.lo(a) || p.x(a) > omega_region.hi(a)) inside = false;
        break;
      }
      case RegionSpec::Kind::Ball:
        inside = model.distance(omega_region.center, p) <= omega_region.radius;
        break;
    }
    if (inside) omega.push_back(int(i));
  }
  if (omega.empty()) throw NumericDomainError("integration: empty omega region");

  SampledDomain omega_dom = ambient;
  omega_dom.points.clear();
  omega_dom.weights.clear();
  for (int i : omega) {
    omega_dom.points.push_back(ambient.points[i]);
    omega_dom.weights.push_back(ambient.weights[i]);
  }
  const auto field = radius_field(model, omega_dom, s, {}, opts.threads);
  DistanceOracle dist(model, ambient);

  double m_value;
  std::string m_source;
  if (!task.contains("m") || (task["m"].is_string() && task["m"].get<std::string>() == "auto")) {
    // Measured multiplicity bound of the covering at k = 8/mu, l = 8/7
    // (nudged off the boundary when mu = 1).
    const double k_cov = 8.0 / mu;
    double l_cov = 8.0 / 7.0;
    if (!(l_cov > k_cov / (k_cov - 1.0))) l_cov = 1.2;
    const auto centers = build_separated_subset(dist, [&] {
      std::vector<double> f(ambient.points.size(), 0.0);
      for (std::size_t oi = 0; oi < omega.size(); ++oi) f[omega[oi]] = field.values[oi];
      return f;
    }(), k_cov, &omega);
    std::vector<double> full(ambient.points.size(), 0.0);
    for (std::size_t oi = 0; oi < omega.size(); ++oi) full[omega[oi]] = field.values[oi];
    const auto rep = build_cover_and_verify(dist, full, centers, k_cov, l_cov);
    m_value = std::max(1, rep.max_multiplicity);
    m_source = "measured multiplicity, k=" + format_double(k_cov) + " l=" + format_double(l_cov);
  } else {
    if (!task["m"].is_number()) config_fail("task.m", "expected a number or \"auto\"");
    m_value = task["m"].get<double>();
    m_source = "configured";
  }

  const auto rep = integration_report(model, ambient, omega, field, exponent, s, mu, m_value, dist);
  json j{{"model", model.name()},
         {"s", rep.s},
         {"mu", rep.mu},
         {"exponent", rep.exponent},
         {"m", rep.m},
         {"m_source", m_source},
         {"lhs", rep.lhs},
         {"volume_term", rep.volume_term},
         {"energy_term", rep.energy_term},
         {"c_measured", rep.c_measured},
         {"c_defined", rep.c_defined},
         {"omega_volume", rep.omega_volume},
         {"omega_mus_volume", rep.omega_mus_volume},
         {"energy_2s", rep.energy_2s},
         {"omega_points", omega.size()},
         {"ambient_points", ambient.points.size()}};
  atomic_write(out_path(opts, output), j.dump(2) + "\n");
  return "integration-check: lhs " + format_double(rep.lhs) + ", C_measured " +
         (rep.c_defined ? format_double(rep.c_measured) : std::string("undefined"));
}

CharPolynomial parse_polynomial(const json& task) {
  const std::string name = task.contains("polynomial") ? task["polynomial"].get<std::string>()
                                                       : std::string("combined");
  if (name == "euler") return CharPolynomial::Euler;
  if (name == "signature") return CharPolynomial::Signature;
  if (name == "combined") return CharPolynomial::CombinedDisplayed;
  config_fail("task.polynomial", "expected euler, signature, or combined");
}

std::string task_transgression(const ModelManifold& model, const json& task,
                               const ScenarioOptions& opts, const json& output) {
  check_object(task, "task",
               {"type", "lo", "hi", "periodic", "n", "levels", "polynomial", "s", "probes"},
               {"lo", "hi", "n"});
  Transgression tg(model);
  Transgression::StokesRegion region;
  region.lo = get_vec4(task["lo"], "task.lo");
  region.hi = get_vec4(task["hi"], "task.hi");
  if (task.contains("periodic")) {
    const json& p = task["periodic"];
    if (!p.is_array() || p.size() != 4) config_fail("task.periodic", "expected 4 booleans");
    for (int i = 0; i < 4; ++i) region.periodic[i] = p[i].get<bool>();
  }
  const int n = int(get_number(task, "task", "n"));
  const int levels = int(get_number_or(task, "levels", 3));
  const CharPolynomial poly = parse_polynomial(task);
  const double s = get_number_or(task, "s", model.compact() ? model.diameter() : 1.0);
  const int probes = int(get_number_or(task, "probes", 3));

  json level_array = json::array();
  double prev = kInf;
  bool halving = true;
  int grid = n;
  for (int lvl = 0; lvl < levels; ++lvl, grid *= 2) {
    const auto res = tg.stokes_check(region, grid, poly);
    if (std::isfinite(prev) && res.residual > 0.5 * prev + 1e-12) halving = false;
    prev = res.residual;
    level_array.push_back(json{{"n", grid},
                               {"interior", res.interior},
                               {"boundary", res.boundary},
                               {"residual", res.residual}});
  }

  // Pointwise diagnostics over a probe grid in the region interior.
  double max_null = 0.0, max_pff = 0.0, tp_bound = 0.0;
  for (int i0 = 0; i0 < probes; ++i0)
    for (int i1 = 0; i1 < probes; ++i1)
      for (int i2 = 0; i2 < probes; ++i2) {
        Vec4 x;
        for (int a = 0; a < 3; ++a) {
          const int idx = (a == 0 ? i0 : a == 1 ? i1 : i2);
          x(a) = region.lo(a) + (idx + 0.5) * (region.hi(a) - region.lo(a)) / probes;
        }
        x(3) = region.lo(3) + 0.5 * (region.hi(3) - region.lo(3));
        const double r = curvature_radius(model, {0, x}, s);
        const auto ft = tg.modified_curvature(x);
        max_null = std::max(max_null, tg.null_contraction_residual(x, ft) * r * r);
        max_pff = std::max(max_pff, std::abs(Transgression::density(ft, ft, poly)));
        const auto tp = tg.transgression_form(x, poly);
        tp_bound = std::max(tp_bound, tg.form3_norm(x, tp) * r * r * r);
      }

  json j{{"model", model.name()},
         {"levels", level_array},
         {"residual_halves", halving},
         {"max_null_contraction", max_null},
         {"max_modified_density", max_pff},
         {"tp_bound_constant", tp_bound}};
  atomic_write(out_path(opts, output), j.dump(2) + "\n");
  std::ostringstream os;
  os << "transgression-check: residual " << format_double(prev) << ", halving "
     << (halving ? "yes" : "no");
  return os.str();
}

std::string task_iterate(const ModelManifold& model, const json& task,
                         const ScenarioOptions& opts, const json& output) {
  check_object(task, "task", {"type", "case", "lambda", "r", "T", "center"}, {"case", "T"});
  const std::string case_name = task["case"].get<std::string>();
  IterationCase kase;
  double scale;
  if (case_name == "large-radius") {
    kase = IterationCase::LargeRadius;
    scale = get_number(task, "task", "lambda");
  } else if (case_name == "small-radius") {
    kase = IterationCase::SmallRadius;
    scale = get_number(task, "task", "r");
  } else {
    config_fail("task.case", "expected large-radius or small-radius");
  }
  const int T = int(get_number(task, "task", "T"));
  const ChartPoint center{0, task.contains("center") ? get_vec4(task["center"], "task.center")
                                                     : Vec4(1, 1, 1, 1)};
  const auto sched = schedule(kase, scale, T);
  const auto series = series_sums(sched);
  const auto trace = run_iteration(model, center, sched);

  CsvTable csv;
  csv.header = {"i", "rho", "mu", "energy_avg", "q_avg", "step_constant"};
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& st = trace.steps[i];
    csv.rows.push_back({std::to_string(i), format_double(st.rho), format_double(st.mu),
                        format_double(st.energy_avg), format_double(st.q_avg),
                        format_double(st.step_constant)});
  }
  atomic_write(out_path(opts, output), csv.serialize());
  std::ostringstream os;
  os << "iterate: " << trace.steps.size() << " steps, max step constant "
     << format_double(trace.max_step_constant) << ", rho limit "
     << format_double(series.rho_limit) << (trace.truncated ? " (truncated)" : "");
  return os.str();
}

std::string task_epsreg_scan(const ModelManifold& model, const json& task,
                             const ScenarioOptions& opts, const json& output) {
  check_object(task, "task",
               {"type", "points", "radii", "lambda", "K", "tau", "radius_cutoff", "eps"},
               {"points", "radii"});
  if (!task["points"].is_array() || !task["radii"].is_array())
    config_fail("task.points", "expected arrays");
  EpsRegOptions eopts;
  if (task.contains("radius_cutoff")) eopts.radius_cutoff = task["radius_cutoff"].get<double>();
  if (task.contains("eps")) eopts.eps_working = task["eps"].get<double>();
  const double lambda = get_number_or(task, "lambda", model.lambda());
  const double window = get_number_or(task, "K", 10.0);

  std::string lines;
  std::size_t count = 0;
  for (const auto& pj : task["points"]) {
    const ChartPoint p{0, get_vec4(pj, "task.points[]")};
    for (const auto& rj : task["radii"]) {
      const double r = rj.get<double>();
      json line{{"point", {p.x(0), p.x(1), p.x(2), p.x(3)}}, {"r", r}};
      line["classify"] = classify_json(classify(model, p, r, lambda, window, eopts));
      line["harnack"] = harnack_json(harnack_probe(model, p, r, eopts));
      if (task.contains("tau")) {
        const auto col =
            collapse_check(model, p, lambda, window, task["tau"].get<double>(), eopts);
        line["collapse"] = json{{"radius", col.radius},
                                {"volume_ratio", col.volume_ratio},
                                {"energy", col.energy},
                                {"collapsed", col.collapsed},
                                {"insufficient_sampling", col.insufficient_sampling}};
      }
      lines += line.dump() + "\n";
      ++count;
    }
  }
  atomic_write(out_path(opts, output), lines);
  return "epsreg-scan: " + std::to_string(count) + " instances";
}

std::string task_gauss_bonnet(const ModelManifold& model, const SampledDomain& domain,
                              const ScenarioOptions& opts, const json& output) {
  double euler = 0.0, signature = 0.0;
  for (std::size_t i = 0; i < domain.points.size(); ++i) {
    const auto cd = characteristic_densities(decompose(model.curvature_at(domain.points[i])));
    euler += domain.weights[i] * cd.pchi;
    signature += domain.weights[i] * cd.ptau;
  }
  json j{{"model", model.name()},
         {"euler_integral", euler},
         {"signature_integral", signature},
         {"domain_volume", domain.volume()},
         {"points", domain.points.size()}};
  atomic_write(out_path(opts, output), j.dump(2) + "\n");
  return "gauss-bonnet: euler integral " + format_double(euler);
}

std::string run_scenario_json(const json& cfg, const ScenarioOptions& opts) {
  check_object(cfg, "(root)", {"name", "seed", "model", "domain", "task", "output"},
               {"name", "seed", "model", "task", "output"});
  if (!cfg["seed"].is_number_integer()) config_fail("seed", "seed is mandatory and integral");
  const std::uint64_t seed = cfg["seed"].get<std::uint64_t>();

  const json& output = cfg["output"];
  check_object(output, "output", {"format", "path"}, {"format", "path"});
  const std::string format = output["format"].get<std::string>();
  if (format != "csv" && format != "json") config_fail("output.format", "expected csv or json");

  const json& task = cfg["task"];
  if (!task.is_object() || !task.contains("type")) config_fail("task.type", "missing task type");
  const std::string type = task["type"].get<std::string>();

  const auto expect_format = [&](const char* want) {
    if (format != want)
      config_fail("output.format", std::string("task ") + type + " writes " + want);
  };

  if (type == "decompose") {
    expect_format("csv");
    return task_decompose(task, seed, opts, output);
  }

  const auto model = parse_model(cfg["model"]);

  auto domain_for = [&]() -> SampledDomain {
    if (!cfg.contains("domain")) config_fail("domain", "task '" + type + "' needs a domain");
    const json& d = cfg["domain"];
    check_object(d, "domain", {"region", "resolution"}, {"region", "resolution"});
    return model->sample_domain(parse_region(d["region"], "domain.region"),
                                get_number(d, "domain", "resolution"), seed);
  };

  if (type == "radius-field") {
    expect_format("csv");
    return task_radius_field(*model, domain_for(), task, opts, output);
  }
  if (type == "cover") {
    expect_format("csv");
    return task_cover(*model, domain_for(), task, opts, output);
  }
  if (type == "integration-check") {
    expect_format("json");
    return task_integration(*model, domain_for(), task, opts, output);
  }
  if (type == "transgression-check") {
    expect_format("json");
    return task_transgression(*model, task, opts, output);
  }
  if (type == "iterate") {
    expect_format("csv");
    return task_iterate(*model, task, opts, output);
  }
  if (type == "epsreg-scan") {
    expect_format("json");
    return task_epsreg_scan(*model, task, opts, output);
  }
  if (type == "gauss-bonnet") {
    expect_format("json");
    return task_gauss_bonnet(*model, domain_for(), opts, output);
  }
  config_fail("task.type", "unknown task '" + type + "'");
}

}  // namespace

std::string run_scenario(const std::string& config_path, const ScenarioOptions& opts) {
  std::ifstream f(config_path);
  if (!f) throw ConfigError("scenario: cannot open config '" + config_path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return run_scenario_text(ss.str(), opts);
}

std::string run_scenario_text(const std::string& config_text, const ScenarioOptions& opts) {
  nlohmann::json cfg;
  try {
    cfg = nlohmann::json::parse(config_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("scenario: config is not valid JSON: ") + e.what());
  }
  std::string task_key = "task";
  if (cfg.is_object() && cfg.contains("task") && cfg["task"].is_object() &&
      cfg["task"].contains("type") && cfg["task"]["type"].is_string())
    task_key = "task." + cfg["task"]["type"].get<std::string>();
  try {
    return run_scenario_json(cfg, opts);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("scenario: malformed config value: ") + e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const NumericDomainError& e) {
    // Surface the originating module message together with the scenario key.
    throw NumericDomainError(std::string(e.what()) + " (scenario key: " + task_key + ")");
  }
}

}  // namespace curv4
