#include "heatlab/config.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

namespace heatlab {

using nlohmann::json;

namespace {

void require_keys(const json& j, const std::string& block,
                  const std::set<std::string>& allowed) {
  if (!j.is_object())
    throw ConfigError("config: block '" + block + "' must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key()))
      throw ConfigError("config: unknown key '" + it.key() + "' in '" + block +
                        "'");
  }
}

double need_number(const json& j, const std::string& block,
                   const std::string& key) {
  if (!j.contains(key))
    throw ConfigError("config: missing key '" + key + "' in '" + block + "'");
  if (!j[key].is_number())
    throw ConfigError("config: key '" + key + "' in '" + block +
                      "' must be a number");
  return j[key].get<double>();
}

double opt_number(const json& j, const std::string& block,
                  const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number())
    throw ConfigError("config: key '" + key + "' in '" + block +
                      "' must be a number");
  return j[key].get<double>();
}

std::string need_string(const json& j, const std::string& block,
                        const std::string& key) {
  if (!j.contains(key) || !j[key].is_string())
    throw ConfigError("config: missing string key '" + key + "' in '" + block +
                      "'");
  return j[key].get<std::string>();
}

std::vector<double> number_list(const json& j, const std::string& block,
                                const std::string& key) {
  if (!j.contains(key) || !j[key].is_array())
    throw ConfigError("config: key '" + key + "' in '" + block +
                      "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j[key]) {
    if (!v.is_number())
      throw ConfigError("config: key '" + key + "' in '" + block +
                        "' must be an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

ManifoldConfig parse_manifold(const json& j) {
  require_keys(j, "manifold", {"kind", "n", "h", "beta_bar"});
  ManifoldConfig c;
  c.kind = need_string(j, "manifold", "kind");
  c.n = static_cast<int>(need_number(j, "manifold", "n"));
  c.h = opt_number(j, "manifold", "h", 0.0);
  c.beta_bar = opt_number(j, "manifold", "beta_bar", 0.0);
  if (c.kind != "euclidean" && c.kind != "hyperbolic" && c.kind != "ricci_decay")
    throw ConfigError("config: manifold kind must be euclidean, hyperbolic or "
                      "ricci_decay");
  return c;
}

DriftBounds parse_bounds(const json& j) {
  require_keys(j, "drift.bounds", {"b0", "b1", "sigma", "nu", "div_upper"});
  DriftBounds b;
  if (j.contains("b0")) b.b0 = need_number(j, "drift.bounds", "b0");
  if (j.contains("b1")) b.b1 = need_number(j, "drift.bounds", "b1");
  if (j.contains("sigma")) b.sigma = need_number(j, "drift.bounds", "sigma");
  if (j.contains("nu")) b.nu = need_number(j, "drift.bounds", "nu");
  if (j.contains("div_upper"))
    b.div_upper = need_number(j, "drift.bounds", "div_upper");
  return b;
}

DriftConfig parse_drift(const json& j) {
  require_keys(j, "drift", {"kind", "value", "nu", "r", "b", "bounds"});
  DriftConfig c;
  c.kind = need_string(j, "drift", "kind");
  if (c.kind == "constant_radial") {
    c.value = need_number(j, "drift", "value");
  } else if (c.kind == "inverse_r") {
    c.nu = need_number(j, "drift", "nu");
  } else if (c.kind == "sampled") {
    c.r = number_list(j, "drift", "r");
    c.b = number_list(j, "drift", "b");
  } else if (c.kind != "none") {
    throw ConfigError("config: drift kind must be none, constant_radial, "
                      "inverse_r or sampled");
  }
  if (j.contains("bounds")) c.bounds = parse_bounds(j["bounds"]);
  return c;
}

DatumConfig parse_datum(const json& j) {
  require_keys(j, "initial_datum",
               {"kind", "amplitude", "width", "radius", "factor", "family"});
  DatumConfig c;
  c.kind = need_string(j, "initial_datum", "kind");
  if (c.kind == "gaussian") {
    c.amplitude = need_number(j, "initial_datum", "amplitude");
    c.width = opt_number(j, "initial_datum", "width", 1.0);
    if (!(c.width > 0))
      throw ConfigError("config: gaussian datum width must be positive");
  } else if (c.kind == "constant_on_ball") {
    c.amplitude = need_number(j, "initial_datum", "amplitude");
    c.radius = need_number(j, "initial_datum", "radius");
    if (!(c.radius > 0))
      throw ConfigError("config: ball datum radius must be positive");
  } else if (c.kind == "barrier_multiple") {
    c.family = need_string(j, "initial_datum", "family");
    c.factor = need_number(j, "initial_datum", "factor");
  } else {
    throw ConfigError("config: initial_datum kind must be gaussian, "
                      "constant_on_ball or barrier_multiple");
  }
  return c;
}

BarrierConfig parse_barrier(const json& j) {
  require_keys(j, "barrier",
               {"family", "lambda", "div_bound", "h2", "r0", "c1", "a",
                "sigma", "epsilon", "t0", "p"});
  BarrierConfig c;
  c.family = need_string(j, "barrier", "family");
  if (c.family == "phi") {
    c.lambda = need_number(j, "barrier", "lambda");
    c.div_bound = opt_number(j, "barrier", "div_bound", 0.0);
    c.h2 = need_number(j, "barrier", "h2");
    c.r0 = opt_number(j, "barrier", "r0", 1.0);
    c.c1 = opt_number(j, "barrier", "c1", 1.0);
  } else if (c.family == "eta") {
    c.a = need_number(j, "barrier", "a");
    c.has_a = true;
    c.lambda = need_number(j, "barrier", "lambda");
    c.div_bound = opt_number(j, "barrier", "div_bound", 0.0);
    c.sigma = opt_number(j, "barrier", "sigma", 0.0);
  } else if (c.family == "w") {
    c.lambda = need_number(j, "barrier", "lambda");
    if (j.contains("a")) {
      c.a = need_number(j, "barrier", "a");
      c.has_a = true;
    }
  } else if (c.family == "gaussian_super") {
    c.epsilon = need_number(j, "barrier", "epsilon");
    c.t0 = opt_number(j, "barrier", "t0", 1.0);
    if (j.contains("p")) c.p = need_number(j, "barrier", "p");
  } else {
    throw ConfigError("config: barrier family must be phi, eta, w or "
                      "gaussian_super");
  }
  return c;
}

SolverConfig parse_solver(const json& j, const ManifoldConfig& m) {
  require_keys(j, "solver",
               {"r_max", "n_grid", "t_end", "u_cap", "dt_min", "safety",
                "grading", "scheme", "snapshot_times"});
  SolverConfig c;
  c.r_max = m.kind == "euclidean" ? 80.0 : 40.0;
  c.r_max = opt_number(j, "solver", "r_max", c.r_max);
  c.n_grid = static_cast<int>(opt_number(j, "solver", "n_grid", 1024));
  c.t_end = opt_number(j, "solver", "t_end", 10.0);
  c.u_cap = opt_number(j, "solver", "u_cap", 1e8);
  c.dt_min = opt_number(j, "solver", "dt_min", 1e-12);
  c.safety = opt_number(j, "solver", "safety", 0.5);
  c.grading = opt_number(j, "solver", "grading", 1.0);
  if (j.contains("scheme")) {
    const std::string s = need_string(j, "solver", "scheme");
    if (s == "imex_be")
      c.scheme = Scheme::imex_be;
    else if (s == "imex_cn")
      c.scheme = Scheme::imex_cn;
    else
      throw ConfigError("config: scheme must be imex_be or imex_cn");
  }
  if (j.contains("snapshot_times"))
    c.snapshot_times = number_list(j, "solver", "snapshot_times");
  c.validate();
  return c;
}

SweepConfig parse_sweep(const json& j) {
  require_keys(j, "sweep", {"p_values", "amplitudes"});
  SweepConfig c;
  c.p_values = number_list(j, "sweep", "p_values");
  c.amplitudes = number_list(j, "sweep", "amplitudes");
  if (c.p_values.empty() || c.amplitudes.empty())
    throw ConfigError("config: sweep axes must be non-empty lists");
  if (!std::is_sorted(c.p_values.begin(), c.p_values.end()) ||
      !std::is_sorted(c.amplitudes.begin(), c.amplitudes.end()))
    throw ConfigError("config: sweep axes must be sorted ascending");
  return c;
}

}  // namespace

const std::vector<std::string>& known_theorem_tags() {
  static const std::vector<std::string> tags = {
      "thm_3_2", "thm_4_2", "thm_5_2", "cor_5_3", "thm_6_2", "freeform"};
  return tags;
}

Scenario parse_scenario(const json& j) {
  require_keys(j, "config",
               {"schema_version", "name", "theorem_tag", "manifold", "drift",
                "p", "initial_datum", "barrier", "barriers", "envelope",
                "solver", "sweep", "seed"});
  const int version =
      static_cast<int>(need_number(j, "config", "schema_version"));
  if (version != 1)
    throw ConfigError("config: unsupported schema_version (expected 1)");

  Scenario sc;
  if (j.contains("name")) sc.name = need_string(j, "config", "name");
  if (j.contains("theorem_tag")) {
    sc.theorem_tag = need_string(j, "config", "theorem_tag");
    const auto& tags = known_theorem_tags();
    if (std::find(tags.begin(), tags.end(), sc.theorem_tag) == tags.end())
      throw ConfigError("config: unknown theorem_tag '" + sc.theorem_tag + "'");
  }
  if (!j.contains("manifold"))
    throw ConfigError("config: missing key 'manifold'");
  sc.manifold = parse_manifold(j["manifold"]);
  if (j.contains("drift")) sc.drift = parse_drift(j["drift"]);
  if (j.contains("p")) {
    sc.p = need_number(j, "config", "p");
    sc.has_p = true;
  }
  if (j.contains("initial_datum")) {
    sc.datum = parse_datum(j["initial_datum"]);
    sc.has_datum = true;
  }
  if (j.contains("barrier")) sc.barriers.push_back(parse_barrier(j["barrier"]));
  if (j.contains("barriers")) {
    if (!j["barriers"].is_array())
      throw ConfigError("config: 'barriers' must be an array");
    for (const auto& b : j["barriers"]) sc.barriers.push_back(parse_barrier(b));
  }
  if (j.contains("envelope")) {
    require_keys(j["envelope"], "envelope", {"c_tilde"});
    sc.envelope_c_tilde = need_number(j["envelope"], "envelope", "c_tilde");
  }
  sc.solver = parse_solver(j.contains("solver") ? j["solver"] : json::object(),
                           sc.manifold);
  sc.solver_given = j.contains("solver");
  if (j.contains("sweep")) sc.sweep = parse_sweep(j["sweep"]);
  if (j.contains("seed"))
    sc.seed = static_cast<unsigned>(need_number(j, "config", "seed"));
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: JSON parse failure: ") + e.what());
  }
  return parse_scenario(j);
}

ModelManifold make_manifold(const ManifoldConfig& c) {
  if (c.kind == "euclidean") return ModelManifold::euclidean(c.n);
  if (c.kind == "hyperbolic") return ModelManifold::hyperbolic(c.n, c.h);
  return ModelManifold::ricci_decay(c.n, c.beta_bar);
}

RadialDriftField make_drift(const DriftConfig& c) {
  RadialDriftField d = RadialDriftField::none();
  if (c.kind == "constant_radial") {
    d = RadialDriftField::constant_radial(c.value);
  } else if (c.kind == "inverse_r") {
    d = RadialDriftField::inverse_r(c.nu);
  } else if (c.kind == "sampled") {
    Eigen::ArrayXd r(c.r.size()), b(c.b.size());
    for (size_t i = 0; i < c.r.size(); ++i) r[i] = c.r[i];
    for (size_t i = 0; i < c.b.size(); ++i) b[i] = c.b[i];
    d = RadialDriftField::sampled(r, b);
  }
  if (c.bounds.b0) d.bounds.b0 = c.bounds.b0;
  if (c.bounds.b1) d.bounds.b1 = c.bounds.b1;
  if (c.bounds.sigma) d.bounds.sigma = c.bounds.sigma;
  if (c.bounds.nu) d.bounds.nu = c.bounds.nu;
  if (c.bounds.div_upper) d.bounds.div_upper = c.bounds.div_upper;
  return d;
}

}  // namespace heatlab
