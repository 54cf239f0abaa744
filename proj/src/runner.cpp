#include "heatlab/runner.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <thread>

#include "heatlab/csv.hpp"
#include "heatlab/solver.hpp"
#include "heatlab/svg.hpp"

namespace heatlab {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

int find_family(const std::vector<Barrier>& bars, Barrier::Family f) {
  for (size_t i = 0; i < bars.size(); ++i)
    if (bars[i].family() == f) return static_cast<int>(i);
  return -1;
}

std::string family_name(Barrier::Family f) {
  switch (f) {
    case Barrier::Family::phi: return "phi";
    case Barrier::Family::eta: return "eta";
    case Barrier::Family::w: return "w";
    case Barrier::Family::gaussian_super: return "gaussian_super";
  }
  return "?";
}

Barrier build_barrier(const BarrierConfig& bc, const ModelManifold& m,
                      const RadialDriftField& drift, const Scenario& sc) {
  DefectGrid grid;
  grid.r_max = std::max(grid.r_max, sc.solver.r_max);
  if (bc.family == "phi")
    return build_phi(m, drift, bc.lambda, bc.div_bound, bc.h2, bc.r0, bc.c1,
                     grid);
  if (bc.family == "eta")
    return build_eta(m, drift, bc.a, bc.lambda, bc.div_bound, bc.sigma, grid);
  if (bc.family == "w")
    return build_w(m, drift, bc.lambda,
                   bc.has_a ? std::optional<double>(bc.a) : std::nullopt,
                   grid);
  if (bc.family == "gaussian_super") {
    double p = bc.p.value_or(sc.p);
    if (!(p > 1))
      throw ParameterError(
          "gaussian_super barrier needs a reaction exponent p > 1");
    GaussianDefectGrid g;
    g.r_max = std::max(g.r_max, sc.solver.r_max);
    g.t_max = std::max(g.t_max, sc.solver.t_end);
    return build_gaussian_super(m, drift, p, bc.epsilon, bc.t0, g);
  }
  throw ConfigError("unknown barrier family " + bc.family);
}

RadialFn make_datum_fn(const DatumConfig& d,
                       const std::vector<Barrier>& barriers) {
  if (d.kind == "gaussian") {
    const double A = d.amplitude, w = d.width;
    return [A, w](double r) { return A * std::exp(-(r / w) * (r / w)); };
  }
  if (d.kind == "constant_on_ball") {
    const double A = d.amplitude, R = d.radius;
    return [A, R](double r) { return r < R ? A : 0.0; };
  }
  // barrier_multiple
  Barrier::Family fam;
  if (d.family == "phi") fam = Barrier::Family::phi;
  else if (d.family == "eta") fam = Barrier::Family::eta;
  else if (d.family == "w") fam = Barrier::Family::w;
  else if (d.family == "gaussian_super") fam = Barrier::Family::gaussian_super;
  else throw ConfigError("initial_datum: unknown barrier family " + d.family);
  const int idx = find_family(barriers, fam);
  if (idx < 0)
    throw ConfigError("initial_datum references barrier family '" + d.family +
                      "' which the scenario does not build");
  const Barrier b = barriers[idx];
  const double f = d.factor;
  return [b, f](double r) { return f * b.value(r, 0.0); };
}

void require(bool cond, const std::string& constraint) {
  if (!cond) throw ParameterError("hypothesis validation failed: " + constraint);
}

void require_cert(const Barrier& b, const std::string& tag) {
  if (b.certificate().pass()) return;
  std::string failing;
  for (const auto& c : b.certificate().checks)
    if (!c.pass) failing += (failing.empty() ? "" : ", ") + c.constraint;
  throw ParameterError("hypothesis validation failed: " + tag + " barrier " +
                       family_name(b.family()) +
                       " certificate rejects: " + failing);
}

// Grid check u0 <= bound on [0, r_max].
void require_dominated(const RadialFn& u0,
                       const std::function<double(double)>& bound,
                       double r_max, const std::string& constraint) {
  const Eigen::ArrayXd rs = log_spaced(1e-6, r_max, 2048);
  auto ok = [&](double r) {
    const double b = bound(r);
    return u0(r) <= b + 1e-12 * std::max(1.0, std::abs(b));
  };
  bool pass = ok(0.0);
  for (int i = 0; i < rs.size() && pass; ++i) pass = ok(rs[i]);
  require(pass, constraint);
}

double manifold_gamma(const Scenario& sc) {
  if (sc.manifold.kind == "ricci_decay")
    return gamma_exponent(sc.manifold.beta_bar);
  if (sc.manifold.kind == "euclidean") return 1.0;
  throw ParameterError(
      "hypothesis validation failed: the decaying-Ricci setting requires a "
      "euclidean or ricci_decay manifold");
}

void validate_theorem(BuiltScenario& bs) {
  const Scenario& sc = bs.cfg;
  const std::string& tag = sc.theorem_tag;
  if (tag == "freeform") {
    // Loose mode: use whatever comparison objects exist.
    if (sc.envelope_c_tilde) {
      const int wi = find_family(bs.barriers, Barrier::Family::w);
      if (wi >= 0 && sc.has_p)
        bs.envelope = make_envelope(bs.barriers[wi].w_params().lambda, sc.p,
                                    *sc.envelope_c_tilde, bs.barriers[wi]);
    }
    return;
  }

  if (tag == "thm_3_2") {
    require(sc.has_p, "thm_3_2 needs the reaction exponent p");
    require(sc.has_datum, "thm_3_2 needs an initial datum");
    const int i = find_family(bs.barriers, Barrier::Family::phi);
    require(i >= 0, "thm_3_2 needs a phi barrier block");
    const auto& pp = bs.barriers[i].phi_params();
    require(sc.manifold.kind == "hyperbolic",
            "thm_3_2 needs strictly negative sectional curvature "
            "(hyperbolic manifold)");
    const auto cert = check_curvature_assumptions(
        bs.manifold, AssumptionTarget::A0(sc.manifold.h, pp.h2), 1e-4,
        sc.solver.r_max, 2048);
    require(cert.pass, "curvature certificate " + cert.assumption);
    require_cert(bs.barriers[i], tag);
    require(bs.barriers[i].normalization().has_value(),
            "thm_3_2 needs an integrable phi (decay rate above (n-1) h2); "
            "increase lambda");
    return;
  }

  if (tag == "thm_4_2") {
    require(sc.has_p, "thm_4_2 needs the reaction exponent p");
    require(sc.has_datum, "thm_4_2 needs an initial datum");
    const int i = find_family(bs.barriers, Barrier::Family::w);
    require(i >= 0, "thm_4_2 needs a w barrier block");
    require_cert(bs.barriers[i], tag);
    require(sc.envelope_c_tilde.has_value(),
            "thm_4_2 needs an envelope block with c_tilde");
    bs.envelope = make_envelope(bs.barriers[i].w_params().lambda, sc.p,
                                *sc.envelope_c_tilde, bs.barriers[i]);
    const Barrier wb = bs.barriers[i];
    const double ct = *sc.envelope_c_tilde;
    require_dominated(
        bs.u0, [wb, ct](double r) { return ct * wb.value(r); },
        sc.solver.r_max, "initial datum must satisfy u0 <= c_tilde w");
    return;
  }

  if (tag == "thm_5_2") {
    require(sc.has_p, "thm_5_2 needs the reaction exponent p");
    require(sc.has_datum, "thm_5_2 needs an initial datum");
    const int i = find_family(bs.barriers, Barrier::Family::eta);
    require(i >= 0, "thm_5_2 needs an eta barrier block");
    require_cert(bs.barriers[i], tag);
    return;
  }

  if (tag == "cor_5_3") {
    require(sc.has_p, "cor_5_3 needs the reaction exponent p");
    require(sc.has_datum, "cor_5_3 needs an initial datum");
    require(bs.drift.bounds.div_upper && *bs.drift.bounds.div_upper == 0.0,
            "cor_5_3 needs a declared divergence bound equal to zero");
    const double gamma = manifold_gamma(sc);
    const double fujita = 1.0 + 2.0 / (gamma * (sc.manifold.n - 1.0) + 1.0);
    std::ostringstream range;
    range << "cor_5_3 needs 1 < p < " << fujita;
    require(sc.p > 1.0 && sc.p < fujita, range.str());
    return;
  }

  if (tag == "thm_6_2") {
    require(sc.has_p, "thm_6_2 needs the reaction exponent p");
    require(sc.has_datum, "thm_6_2 needs an initial datum");
    const int i = find_family(bs.barriers, Barrier::Family::gaussian_super);
    require(i >= 0, "thm_6_2 needs a gaussian_super barrier block");
    require_cert(bs.barriers[i], tag);
    const Barrier gb = bs.barriers[i];
    require_dominated(
        bs.u0, [gb](double r) { return gb.value(r, 0.0); }, sc.solver.r_max,
        "initial datum must sit below the supersolution at t = 0");
    return;
  }
}

int worker_count() {
  if (const char* env = std::getenv("HEATLAB_WORKERS")) {
    const int n = std::atoi(env);
    if (n >= 1) return std::min(n, 64);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return std::clamp<int>(static_cast<int>(hw), 1, 8);
}

json number_claim(double value, const std::string& op, double tol) {
  json j;
  j["value"] = value;
  j["operation"] = op;
  j["tolerance"] = tol;
  return j;
}

json outcome_to_json(const Outcome& o) {
  json j;
  switch (o.kind) {
    case Outcome::Kind::blowup:
      j["kind"] = "blowup";
      j["t_est"] = number_claim(o.t_est, "simulate halt time", 0.0);
      break;
    case Outcome::Kind::global_up_to:
      j["kind"] = "global_up_to";
      j["horizon"] = o.horizon;
      if (std::isfinite(o.envelope_margin))
        j["envelope_margin"] =
            number_claim(o.envelope_margin, "classify_outcome margin", 1e-6);
      break;
    case Outcome::Kind::inconclusive:
      j["kind"] = "inconclusive";
      break;
  }
  j["reason"] = o.reason;
  return j;
}

// Weighted mass of the initial datum against a normalized barrier; splits
// the quadrature at the phi gluing radius and truncates ball data exactly.
KaplanVerdict scenario_mass_test(const BuiltScenario& bs, const Barrier& bar,
                                 double lambda) {
  const Scenario& sc = bs.cfg;
  double r_hi = sc.solver.r_max;
  if (sc.datum.kind == "constant_on_ball")
    r_hi = std::min(r_hi, sc.datum.radius);
  const double norm = *bar.normalization();
  auto f = [&](double r) { return bs.u0(r) * bar.value(r); };
  double integral = 0;
  if (bar.family() == Barrier::Family::phi &&
      bar.phi_params().R0 < r_hi) {
    const double R0 = bar.phi_params().R0;
    integral = integrate_radial(f, bs.manifold, 0.0, R0, QuadratureRule{}) +
               integrate_radial(f, bs.manifold, R0, r_hi, QuadratureRule{});
  } else {
    integral = integrate_radial(f, bs.manifold, r_hi);
  }
  KaplanVerdict v;
  v.mass = norm * integral;
  v.threshold = kaplan_threshold(lambda, sc.p);
  v.predicts_blowup = v.mass > v.threshold * (1.0 + 1e-14);
  if (v.predicts_blowup)
    v.ode_blowup_time_upper = ode_blowup_time(v.mass, lambda, sc.p);
  return v;
}

double barrier_lambda(const Barrier& b) {
  switch (b.family()) {
    case Barrier::Family::phi: return b.phi_params().lambda;
    case Barrier::Family::eta: return b.eta_params().lambda;
    case Barrier::Family::w: return b.w_params().lambda;
    case Barrier::Family::gaussian_super: return kNaN;
  }
  return kNaN;
}

}  // namespace

json certificate_to_json(const Barrier& b) {
  const auto& cert = b.certificate();
  json rows = json::array();
  for (const auto& c : cert.checks) {
    json row;
    row["constraint"] = c.constraint;
    row["paper_eq"] = c.paper_eq;
    row["closed_form_bound"] = c.closed_form_bound;
    row["verified_bound"] = c.verified_bound;
    row["max_violation"] = c.max_violation;
    rows.push_back(row);
  }
  json j;
  j["family"] = family_name(b.family());
  j["constraints"] = rows;
  j["min_relative_defect"] = cert.min_relative_defect;
  j["normalizable"] = cert.normalizable;
  if (b.normalization()) j["normalization"] = *b.normalization();
  j["pass"] = cert.pass();
  switch (b.family()) {
    case Barrier::Family::phi: {
      const auto& p = b.phi_params();
      j["parameters"] = {{"a1", p.a1}, {"a2", p.a2}, {"C1", p.C1},
                         {"C2", p.C2}, {"R0", p.R0}, {"lambda", p.lambda},
                         {"div_bound", p.div_bound}, {"h2", p.h2}};
      break;
    }
    case Barrier::Family::eta: {
      const auto& p = b.eta_params();
      j["parameters"] = {{"a", p.a},
                         {"lambda", p.lambda},
                         {"div_bound", p.div_bound},
                         {"sigma_drift", p.sigma_drift},
                         {"measured_c1", p.measured_c1}};
      break;
    }
    case Barrier::Family::w: {
      const auto& p = b.w_params();
      j["parameters"] = {{"a", p.a},
                         {"lambda", p.lambda},
                         {"sigma_spectral", p.sigma_spectral},
                         {"h1", p.h1},
                         {"b1", p.b1}};
      break;
    }
    case Barrier::Family::gaussian_super: {
      const auto& p = b.gaussian_params();
      j["parameters"] = {{"alpha", p.alpha}, {"C", p.C},   {"t0", p.t0},
                         {"epsilon", p.epsilon}, {"nu", p.nu}, {"p", p.p}};
      break;
    }
  }
  return j;
}

BuiltScenario build_scenario(const Scenario& sc) {
  BuiltScenario bs{sc, make_manifold(sc.manifold), make_drift(sc.drift),
                   {},  -1, -1, std::nullopt, RadialFn{}};
  for (const auto& bc : sc.barriers)
    bs.barriers.push_back(build_barrier(bc, bs.manifold, bs.drift, sc));
  for (size_t i = 0; i < bs.barriers.size(); ++i) {
    if (bs.normalized_idx < 0 && bs.barriers[i].normalization())
      bs.normalized_idx = static_cast<int>(i);
    if (bs.barriers[i].family() == Barrier::Family::gaussian_super)
      bs.gaussian_idx = static_cast<int>(i);
  }
  if (sc.has_datum) bs.u0 = make_datum_fn(sc.datum, bs.barriers);
  validate_theorem(bs);
  return bs;
}

Report run_scenario_json(const json& cfg, const std::string& out_dir) {
  const auto t_start = std::chrono::steady_clock::now();
  Scenario sc = parse_scenario(cfg);
  BuiltScenario bs = build_scenario(sc);
  require(sc.has_p, "run needs the reaction exponent p");
  require(sc.has_datum, "run needs an initial datum");

  const fs::path dir = fs::path(out_dir) / sc.name;
  fs::create_directories(dir);
  std::vector<std::string> files;

  json report;
  report["scenario"] = cfg;
  report["theorem_tag"] = sc.theorem_tag;
  json certs = json::array();
  for (const auto& b : bs.barriers) certs.push_back(certificate_to_json(b));
  {
    std::ofstream out(dir / "certificates.json");
    out << certs.dump(2) << "\n";
    files.push_back((dir / "certificates.json").string());
  }
  report["certificates"] = certs;

  json verdicts;
  if (bs.normalized_idx >= 0) {
    const Barrier& nb = bs.barriers[bs.normalized_idx];
    const double lambda = barrier_lambda(nb);
    KaplanVerdict v = scenario_mass_test(bs, nb, lambda);
    json k;
    k["mass"] = number_claim(v.mass, "mass_test", 1e-9);
    k["threshold"] = number_claim(v.threshold, "kaplan_threshold", 0.0);
    k["predicts_blowup"] = v.predicts_blowup;
    if (v.ode_blowup_time_upper)
      k["ode_blowup_time"] =
          number_claim(*v.ode_blowup_time_upper, "ode_blowup_time", 0.005);
    k["lambda"] = lambda;
    k["weight_family"] = family_name(nb.family());
    verdicts["kaplan"] = k;
  }

  // Solve.
  const Barrier* mass_bar =
      bs.normalized_idx >= 0 ? &bs.barriers[bs.normalized_idx] : nullptr;
  SimulateResult sim =
      simulate(bs.u0, bs.manifold, bs.drift, sc.p, sc.solver, mass_bar);

  RadialTimeFn env_fn;
  if (bs.envelope) {
    const Envelope& e = *bs.envelope;
    env_fn = [e](double r, double t) { return e.value(r, t); };
  } else if (bs.gaussian_idx >= 0) {
    const Barrier g = bs.barriers[bs.gaussian_idx];
    env_fn = [g](double r, double t) { return g.value(r, t); };
  }
  Outcome outcome =
      env_fn ? classify_outcome(sim.solution, &env_fn) : sim.outcome;
  verdicts["outcome"] = outcome_to_json(outcome);
  report["verdicts"] = verdicts;

  // Artifacts.
  const std::string ts_path = (dir / "timeseries.csv").string();
  write_timeseries_csv(ts_path, sim.solution.history);
  files.push_back(ts_path);
  for (const auto& snap : sim.solution.snapshots) {
    const std::string p = (dir / profile_filename(snap.t)).string();
    write_profile_csv(p, sim.solution.grid, snap.u);
    files.push_back(p);
  }
  {
    SvgSeries sup;
    sup.name = "sup u";
    for (const auto& row : sim.solution.history) {
      sup.x.push_back(row.t);
      sup.y.push_back(row.sup_u);
    }
    const std::string p = (dir / "supu.svg").string();
    write_line_chart_svg(p, sc.name + ": supremum history", "t", "sup u",
                         {sup}, true);
    files.push_back(p);
  }
  if (mass_bar != nullptr && !sim.solution.snapshots.empty()) {
    auto series = mass_series(sim.solution, *mass_bar, bs.manifold);
    json arr = json::array();
    for (auto& [t, mass] : series) arr.push_back({{"t", t}, {"mass", mass}});
    report["mass_series"] = {{"operation", "mass_series"},
                             {"tolerance", 1e-6},
                             {"values", arr}};
  }

  json diag;
  diag["steps"] = sim.solution.history.size() - 1;
  diag["clip_count"] = sim.solution.clip_count;
  diag["min_before_clip"] = sim.solution.min_before_clip;
  diag["boundary_flux"] =
      number_claim(sim.solution.boundary_flux, "truncation diagnostic", 0.0);
  report["diagnostics"] = diag;
  report["files"] = files;
  report["wall_time_s"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();

  Report rep;
  rep.body = report;
  rep.path = (dir / "report.json").string();
  std::ofstream out(rep.path);
  out << report.dump(2) << "\n";
  return rep;
}

Report run_scenario_file(const std::string& config_path,
                         const std::string& out_dir) {
  std::ifstream in(config_path);
  if (!in) throw ConfigError("config: cannot open '" + config_path + "'");
  json cfg;
  try {
    in >> cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: JSON parse failure: ") + e.what());
  }
  return run_scenario_json(cfg, out_dir);
}

json threshold_report_json(const json& cfg) {
  Scenario sc = parse_scenario(cfg);
  BuiltScenario bs = build_scenario(sc);
  require(sc.has_p, "threshold needs the reaction exponent p");
  require(sc.has_datum, "threshold needs an initial datum");
  require(bs.normalized_idx >= 0,
          "threshold needs a normalized barrier (phi or eta)");
  const Barrier& nb = bs.barriers[bs.normalized_idx];
  const double lambda = barrier_lambda(nb);
  KaplanVerdict v = scenario_mass_test(bs, nb, lambda);
  json out;
  out["mass"] = v.mass;
  out["threshold"] = v.threshold;
  out["predicts_blowup"] = v.predicts_blowup;
  out["ode_blowup_time"] =
      v.ode_blowup_time_upper ? json(*v.ode_blowup_time_upper) : json();
  out["parameters"] = {{"lambda", lambda},
                       {"p", sc.p},
                       {"weight_family", family_name(nb.family())},
                       {"normalization", *nb.normalization()}};
  return out;
}

json threshold_report_file(const std::string& config_path) {
  std::ifstream in(config_path);
  if (!in) throw ConfigError("config: cannot open '" + config_path + "'");
  json cfg;
  try {
    in >> cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: JSON parse failure: ") + e.what());
  }
  return threshold_report_json(cfg);
}

std::string barrier_check_file(const std::string& config_path,
                               const std::string& out_dir) {
  Scenario sc = load_scenario(config_path);
  if (sc.barriers.empty())
    throw ConfigError("barrier-check: the config defines no barrier blocks");
  BuiltScenario bs = build_scenario(sc);
  const fs::path dir = fs::path(out_dir) / sc.name;
  fs::create_directories(dir);
  json certs = json::array();
  for (const auto& b : bs.barriers) certs.push_back(certificate_to_json(b));
  const std::string path = (dir / "certificates.json").string();
  std::ofstream out(path);
  out << certs.dump(2) << "\n";
  return path;
}

namespace {

struct CellResult {
  int code = 2;  // 0 blowup, 1 global, 2 inconclusive
  double t_blowup = kNaN;
  double margin = kNaN;
  bool certified = false;
};

CellResult run_cell(const Scenario& base, const ModelManifold& m,
                    const RadialDriftField& drift, double p, double A,
                    double measured_c1, bool try_certify) {
  CellResult cell;
  Scenario sc = base;
  sc.p = p;
  sc.has_p = true;
  sc.theorem_tag = "freeform";
  if (sc.datum.kind == "barrier_multiple")
    sc.datum.factor = A;
  else
    sc.datum.amplitude = A;

  // Barriers that survive this cell's exponent.
  std::vector<Barrier> barriers;
  for (const auto& bc : sc.barriers) {
    try {
      barriers.push_back(build_barrier(bc, m, drift, sc));
    } catch (const ParameterError&) {
    }
  }
  RadialFn u0;
  try {
    u0 = make_datum_fn(sc.datum, barriers);
  } catch (const ConfigError&) {
    return cell;
  }

  if (try_certify) {
    try {
      const double sigma = drift.bounds.sigma.value_or(0.0);
      const double gamma = sc.manifold.kind == "ricci_decay"
                               ? gamma_exponent(sc.manifold.beta_bar)
                               : 1.0;
      SmallAResult sr =
          find_small_a(u0, m, drift, sigma, 0.0, measured_c1, p, gamma);
      cell.certified = sr.certified;
    } catch (const std::exception&) {
    }
  }

  try {
    const int gi = find_family(barriers, Barrier::Family::gaussian_super);
    SimulateResult sim = simulate(u0, m, drift, p, sc.solver);
    Outcome out = sim.outcome;
    if (gi >= 0) {
      const Barrier g = barriers[gi];
      RadialTimeFn env = [g](double r, double t) { return g.value(r, t); };
      out = classify_outcome(sim.solution, &env);
    }
    if (out.kind == Outcome::Kind::blowup) {
      cell.code = 0;
      cell.t_blowup = out.t_est;
      return cell;
    }
    if (cell.certified) {
      cell.code = 0;
      return cell;
    }
    cell.code = out.kind == Outcome::Kind::global_up_to ? 1 : 2;
    cell.margin = out.envelope_margin;
  } catch (const std::exception&) {
    cell.code = cell.certified ? 0 : 2;
  }
  return cell;
}

}  // namespace

std::string sweep_file(const std::string& config_path,
                       const std::string& out_dir) {
  Scenario base = load_scenario(config_path);
  if (!base.sweep)
    throw ConfigError("sweep: the config carries no sweep block");
  if (!base.has_datum)
    throw ConfigError("sweep: the base scenario needs an initial datum");
  const SweepConfig sweep = *base.sweep;

  const ModelManifold m = make_manifold(base.manifold);
  const RadialDriftField drift = make_drift(base.drift);

  // Certification applies on decaying-Ricci geometries with a zero
  // divergence bound.
  bool try_certify = base.manifold.kind != "hyperbolic" &&
                     drift.bounds.div_upper &&
                     *drift.bounds.div_upper == 0.0;
  double measured_c1 = 1.0;
  if (try_certify) {
    const double beta = base.manifold.kind == "ricci_decay"
                            ? base.manifold.beta_bar
                            : 0.0;
    const auto cert = check_curvature_assumptions(
        m, AssumptionTarget::A1(beta), 1e-4, 1e4, 2048);
    try_certify = cert.pass;
    measured_c1 = cert.measured_c1;
  }

  const int np = static_cast<int>(sweep.p_values.size());
  const int na = static_cast<int>(sweep.amplitudes.size());
  std::vector<CellResult> cells(np * na);
  std::atomic<int> next{0};
  const int workers = std::min(worker_count(), np * na);
  auto work = [&]() {
    while (true) {
      const int idx = next.fetch_add(1);
      if (idx >= np * na) return;
      const int j = idx / np, i = idx % np;
      cells[idx] = run_cell(base, m, drift, sweep.p_values[i],
                            sweep.amplitudes[j], measured_c1, try_certify);
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < workers; ++t) pool.emplace_back(work);
  for (auto& th : pool) th.join();

  const fs::path dir = fs::path(out_dir) / base.name;
  fs::create_directories(dir);
  const std::string csv_path = (dir / "sweep.csv").string();
  {
    std::ofstream out(csv_path, std::ios::binary);
    out << "p,amplitude,outcome,t_blowup,margin\n";
    static const char* names[] = {"blowup", "global", "inconclusive"};
    for (int j = 0; j < na; ++j) {
      for (int i = 0; i < np; ++i) {
        const CellResult& c = cells[j * np + i];
        out << format_g17(sweep.p_values[i]) << ','
            << format_g17(sweep.amplitudes[j]) << ',' << names[c.code] << ','
            << format_g17(c.t_blowup) << ',' << format_g17(c.margin) << '\n';
      }
    }
  }

  PhasePlotData plot;
  plot.p_values = sweep.p_values;
  plot.amplitudes = sweep.amplitudes;
  for (const auto& c : cells) plot.outcome.push_back(c.code);
  try {
    const double gamma = manifold_gamma(base);
    const double nu = drift.bounds.nu.value_or(0.0);
    ExponentRanges er = exponent_ranges(base.manifold.n, gamma, nu);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "nonexistence bound %.4g",
                  er.fujita_nonexistence_upper);
    plot.vlines.emplace_back(er.fujita_nonexistence_upper, buf);
    std::snprintf(buf, sizeof(buf), "existence bound %.4g", er.existence_lower);
    plot.vlines.emplace_back(er.existence_lower, buf);
  } catch (const std::exception&) {
    // exponent annotations do not apply on this geometry
  }
  write_phase_svg((dir / "phase.svg").string(),
                  base.name + ": outcome phase diagram", plot);
  return csv_path;
}

}  // namespace heatlab
