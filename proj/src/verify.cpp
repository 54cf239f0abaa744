#include "heatlab/verify.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <random>
#include <sstream>

#include "heatlab/csv.hpp"
#include "heatlab/runner.hpp"
#include "heatlab/solver.hpp"

namespace heatlab {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

CheckResult check_leq(const std::string& name, double value, double tol,
                      const std::string& detail = "") {
  CheckResult c;
  c.name = name;
  c.value = value;
  c.tol = tol;
  c.pass = value <= tol;
  c.detail = detail;
  return c;
}

CheckResult check_flag(const std::string& name, bool ok,
                       const std::string& detail = "") {
  CheckResult c;
  c.name = name;
  c.value = ok ? 0.0 : 1.0;
  c.tol = 0.0;
  c.pass = ok;
  c.detail = detail;
  return c;
}

// ---------------------------------------------------------------- geometry

void suite_geometry(std::vector<CheckResult>& out) {
  {
    auto m = ModelManifold::hyperbolic(3, 0.7);
    const Eigen::ArrayXd rs = log_spaced(1e-3, 50.0, 1000);
    double worst = 0;
    for (int i = 0; i < rs.size(); ++i) {
      const double expect = 2.0 * 0.7 / std::tanh(0.7 * rs[i]);
      worst = std::max(worst,
                       std::abs(m.mean_curvature(rs[i]) - expect) / expect);
    }
    out.push_back(check_leq("geometry/hyperbolic_coth_identity", worst, 1e-13,
                            "1000 sampled radii"));
  }
  {
    double worst = -kInf;
    for (auto m : {ModelManifold::euclidean(3),
                   ModelManifold::hyperbolic(3, 1.0),
                   ModelManifold::ricci_decay(3, 2.0)}) {
      const Eigen::ArrayXd rs = log_spaced(1e-4, 100.0, 400);
      for (int i = 0; i < rs.size(); ++i) {
        const double f = m.mean_curvature(rs[i]);
        worst = std::max(worst, ((m.dim() - 1) / rs[i] - f) / f);
      }
    }
    out.push_back(check_leq("geometry/mean_curvature_lower_bound", worst,
                            1e-12, "F >= (n-1)/r on all models"));
  }
  {
    double worst = -kInf;
    for (double bb : {0.5, 2.0, 6.0}) {
      auto m = ModelManifold::ricci_decay(3, bb);
      auto cert = check_curvature_assumptions(m, AssumptionTarget::A1(bb),
                                              1e-4, 1e4, 2048);
      worst = std::max(worst, cert.max_violation);
    }
    out.push_back(check_leq("geometry/ricci_equality_certificates", worst, 0.0,
                            "A1 grid residual, slack-adjusted"));
  }
  {
    auto eu = ModelManifold::euclidean(3);
    const double ball = integrate_radial([](double) { return 1.0; }, eu, 1.0);
    const double expdec =
        integrate_radial([](double r) { return std::exp(-r); }, eu, 80.0);
    const double res =
        std::max(std::abs(ball - 4.0 * kPi / 3.0) / (4.0 * kPi / 3.0),
                 std::abs(expdec - 8.0 * kPi) / (8.0 * kPi));
    out.push_back(check_leq("geometry/weighted_integrals", res, 1e-9,
                            "ball volume and exponential moment"));
  }
  {
    auto eu = ModelManifold::euclidean(3);
    auto f = [](double r) { return std::exp(-0.25 * r * r) * (1.0 + r); };
    QuadratureRule r1, r2;
    r1.panels = 32;
    r2.panels = 64;
    const double v1 = integrate_radial(f, eu, 30.0, r1);
    const double v2 = integrate_radial(f, eu, 30.0, r2);
    out.push_back(check_leq("geometry/panel_doubling_stability",
                            std::abs(v1 - v2) / std::abs(v1), 1e-10));
  }
}

// AC-1: area growth exponents of the decaying-Ricci models.
void check_ac1(std::vector<CheckResult>& out) {
  const auto t0 = Clock::now();
  double worst = 0;
  std::ostringstream detail;
  for (double bb : {0.5, 2.0, 6.0}) {
    auto m = ModelManifold::ricci_decay(3, bb);
    const double fitted = fitted_area_growth_exponent(m, 1e3, 1e4, 40);
    const double expect = gamma_exponent(bb) * (m.dim() - 1);
    const double rel = std::abs(fitted - expect) / expect;
    worst = std::max(worst, rel);
    detail << "beta=" << bb << ": fit " << fitted << " vs " << expect << "; ";
  }
  out.push_back(
      check_leq("AC-1/area_growth_exponent", worst, 0.02, detail.str()));
  out.push_back(check_leq("AC-1/runtime_s", seconds_since(t0), 5.0));
}

// ---------------------------------------------------------------- barriers

// AC-2: the four reference barriers certify with defects >= -1e-12.
void check_ac2(std::vector<CheckResult>& out) {
  const auto t0 = Clock::now();
  auto hyp = ModelManifold::hyperbolic(3, 1.0);
  auto eu = ModelManifold::euclidean(3);
  auto none = RadialDriftField::none();
  GaussianDefectGrid gg;
  gg.nr = 63;  // 64 radii including the origin limit, 64 times = 4096 points
  gg.nt = 64;
  const Barrier bars[4] = {build_phi(hyp, none, 6.0, 0.0, 1.0, 1.0, 1.0),
                           build_eta(eu, none, 0.1, 0.6, 0.0, 0.0),
                           build_w(hyp, none, 0.75, 1.0),
                           build_gaussian_super(eu, none, 2.0, 0.2, 1.0, gg)};
  double floor = kInf;
  bool all_pass = true;
  for (const auto& b : bars) {
    floor = std::min(floor, b.certificate().min_relative_defect);
    all_pass = all_pass && b.certificate().pass();
  }
  CheckResult c = check_leq("AC-2/certificate_defect_floor", -floor, 1e-12,
                            "phi, eta, w, gaussian_super at 4096 points");
  c.pass = c.pass && all_pass;
  out.push_back(c);
  out.push_back(check_leq("AC-2/runtime_s", seconds_since(t0), 5.0));
}

void suite_barriers(std::vector<CheckResult>& out) {
  check_ac2(out);
  auto hyp = ModelManifold::hyperbolic(3, 1.0);
  auto eu = ModelManifold::euclidean(3);
  auto none = RadialDriftField::none();
  {
    Barrier phi8 = build_phi(hyp, none, 8.0, 0.0, 1.0, 1.0, 1.0);
    const auto& p = phi8.phi_params();
    const double vin = p.C2 * std::exp(-p.a2 * p.R0 * p.R0);
    const double vout = p.C1 * std::exp(-p.a1 * p.R0);
    const double din = -2.0 * p.a2 * p.R0 * vin;
    const double dout = -p.a1 * vout;
    const double res = std::max(std::abs(vin - vout) / vout,
                                std::abs(din - dout) / std::abs(dout));
    out.push_back(check_leq("barriers/gluing_c1_identity", res, 1e-14));

    auto v = [&](double r) { return phi8.value(r); };
    const double c = *phi8.normalization();
    const double tot =
        c * (integrate_radial(v, hyp, 0.0, 1.0, QuadratureRule{}) +
             integrate_radial(v, hyp, 1.0, 320.0, QuadratureRule{}));
    Barrier eta = build_eta(eu, none, 0.1, 0.6, 0.0, 0.0);
    const double tot2 =
        *eta.normalization() *
        integrate_radial([&](double r) { return eta.value(r); }, eu, 40.0);
    out.push_back(check_leq("barriers/normalization_partition_of_unity",
                            std::max(std::abs(tot - 1.0), std::abs(tot2 - 1.0)),
                            1e-9, "c int phi = k int eta = 1"));

    Barrier phi_scaled = build_phi(hyp, none, 8.0, 0.0, 1.0, 1.0, 2.0);
    const double r1 = std::abs(phi_scaled.value(1.7) / phi8.value(1.7) - 2.0);
    const double r2 =
        std::abs(*phi_scaled.normalization() / *phi8.normalization() - 0.5);
    out.push_back(check_leq("barriers/normalized_weight_scale_invariance",
                            std::max(r1, r2), 1e-9));
  }
  {
    double prev = kInf, floor = kInf;
    bool monotone = true;
    for (double lam : {0.2, 0.4, 0.6, 0.8, 0.95}) {
      Barrier w = build_w(hyp, none, lam, 1.0);
      const double d = w.certificate().min_relative_defect;
      monotone = monotone && d < prev;
      floor = std::min(floor, d);
      prev = d;
    }
    out.push_back(check_flag("barriers/w_margin_monotone_in_lambda",
                             monotone && floor >= -1e-12,
                             "margin shrinks toward the vertex root"));
  }
}

// ---------------------------------------------------------------- criteria

void check_ac5(std::vector<CheckResult>& out) {
  const auto t0 = Clock::now();
  std::mt19937 rng(0);
  // p below 1.1 pushes lambda^{1/(p-1)} and the integration stop level out
  // of double range; admissible triples stay inside it.
  std::uniform_real_distribution<double> up(1.1, 4.0), ul(0.0, 10.0),
      ur(std::log(1.01), std::log(100.0));
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const double p = up(rng), lam = ul(rng);
    const double thr = lam > 0 ? std::pow(lam, 1.0 / (p - 1.0)) : 1.0;
    const double m0 = std::exp(ur(rng)) * thr;
    const double closed = ode_blowup_time(m0, lam, p);
    const double numeric = ode_blowup_time_numeric(m0, lam, p);
    worst = std::max(worst, std::abs(closed - numeric) / closed);
  }
  out.push_back(check_leq("AC-5/ode_oracle_agreement", worst, 0.005,
                          "100 random admissible triples"));
  out.push_back(check_leq("AC-5/runtime_s", seconds_since(t0), 1.0));
}

void suite_criteria(std::vector<CheckResult>& out) {
  check_ac5(out);
  {
    ExponentRanges e = exponent_ranges(3, 1.0, 0.0);
    out.push_back(check_flag("criteria/flat_space_exponent_consistency",
                             e.fujita_nonexistence_upper == e.existence_lower &&
                                 e.fujita_nonexistence_upper == 1.0 + 2.0 / 3.0,
                             "both bounds equal 1 + 2/n exactly"));
  }
  {
    auto hyp = ModelManifold::hyperbolic(3, 1.0);
    auto none = RadialDriftField::none();
    Barrier w = build_w(hyp, none, 0.75, 1.0);
    Envelope env = make_envelope(0.75, 2.0, 0.675, w);
    double worst = kInf;
    const Eigen::ArrayXd rs = log_spaced(1e-4, 40.0, 256);
    for (int j = 0; j <= 40; ++j) {
      const double t = 0.25 * j;
      for (int i = 0; i < rs.size(); ++i)
        worst = std::min(worst,
                         envelope_parabolic_defect(env, hyp, none, rs[i], t));
    }
    out.push_back(check_leq("criteria/envelope_supersolution_defect", -worst,
                            1e-10, "space-time grid"));

    bool monotone = true;
    double prev = 0.0;
    for (double t = 0.0; t <= 30.0; t += 0.25) {
      const double x = env.xi(t);
      monotone = monotone && x >= prev && x <= env.xi_infinity() * (1 + 1e-12);
      prev = x;
    }
    out.push_back(check_flag("criteria/xi_monotone_bounded", monotone));
  }
  {
    auto eu = ModelManifold::euclidean(3);
    auto none = RadialDriftField::none();
    Barrier e1 = build_eta(eu, none, 0.1, 0.6, 0.0, 0.0);
    auto bump = [](double r) { return 3.0 * std::exp(-r * r); };
    const KaplanVerdict v1 = mass_test(bump, e1, eu, 0.6, 2.0, 60.0);
    // The same weight rescaled: mass_test must be scale-invariant because
    // the normalization absorbs the constant.
    auto hyp = ModelManifold::hyperbolic(3, 1.0);
    Barrier p1 = build_phi(hyp, none, 8.0, 0.0, 1.0, 1.0, 1.0);
    Barrier p2 = build_phi(hyp, none, 8.0, 0.0, 1.0, 1.0, 5.0);
    const KaplanVerdict w1 = mass_test(bump, p1, hyp, 8.0, 2.0, 40.0);
    const KaplanVerdict w2 = mass_test(bump, p2, hyp, 8.0, 2.0, 40.0);
    const double res = std::abs(w1.mass - w2.mass) /
                       std::max(1e-300, std::abs(w1.mass));
    CheckResult c = check_leq("criteria/mass_rescaling_invariance", res, 1e-10);
    c.pass = c.pass && v1.predicts_blowup == (v1.mass > v1.threshold);
    out.push_back(c);
  }
}

// ------------------------------------------------------------------ solver

// Manufactured-solution convergence study (second-order central stencil).
double manufactured_error(int n_grid) {
  auto m = ModelManifold::euclidean(3);
  auto none = RadialDriftField::none();
  const double R = 10.0;
  const double k = kPi / (2.0 * R);
  auto exact = [k](double r, double t) {
    return std::exp(-t) * std::cos(k * r);
  };
  RadialTimeFn source = [k](double r, double t) {
    if (r == 0.0) return std::exp(-t) * (3.0 * k * k - 1.0);
    return std::exp(-t) * ((k * k - 1.0) * std::cos(k * r) +
                           (2.0 / r) * k * std::sin(k * r));
  };
  SolverConfig cfg;
  cfg.r_max = R;
  cfg.n_grid = n_grid;
  cfg.t_end = 0.25;
  cfg.scheme = Scheme::imex_cn;
  auto res = simulate_linear_forced(
      [&](double r) { return exact(r, 0.0); }, m, none, source, cfg);
  double err = 0.0;
  for (int i = 0; i < res.solution.grid.size(); ++i)
    err = std::max(err, std::abs(res.solution.values[i] -
                                 exact(res.solution.grid[i], 0.25)));
  return err;
}

void check_ac7(std::vector<CheckResult>& out) {
  const auto t0 = Clock::now();
  const double e512 = manufactured_error(512);
  const double e1024 = manufactured_error(1024);
  CheckResult c;
  c.name = "AC-7/convergence_order_ratio";
  c.value = e512 / e1024;
  c.tol = 3.7;
  c.pass = c.value >= 3.7;
  std::ostringstream d;
  d << "max-norm errors " << e512 << " -> " << e1024;
  c.detail = d.str();
  out.push_back(c);
  out.push_back(check_leq("AC-7/runtime_s", seconds_since(t0), 30.0));
}

void suite_solver(std::vector<CheckResult>& out) {
  check_ac7(out);
  {
    auto m = ModelManifold::euclidean(3);
    auto none = RadialDriftField::none();
    RadialSolution st;
    st.grid = Eigen::ArrayXd::LinSpaced(201, 0.0, 10.0);
    st.values = st.grid * st.grid;
    Eigen::ArrayXd L = apply_spatial_operator(st, m, none);
    double res = std::abs(L[0] - 6.0);
    for (int i = 1; i + 1 < L.size(); ++i)
      res = std::max(res, std::abs(L[i] - 6.0));
    out.push_back(check_leq("solver/operator_quadratic_exactness", res, 1e-9));
  }
  {
    auto hyp = ModelManifold::hyperbolic(3, 1.0);
    auto none = RadialDriftField::none();
    Barrier w = build_w(hyp, none, 0.75, 1.0);
    const double ct = 0.675;
    Envelope env = make_envelope(0.75, 2.0, ct, w);
    SolverConfig cfg;
    cfg.r_max = 40.0;
    cfg.n_grid = 512;
    cfg.t_end = 2.0;
    cfg.snapshot_times = {0.0, 0.5, 1.0, 1.5, 2.0};
    auto res = simulate([&](double r) { return 0.9 * ct * w.value(r); }, hyp,
                        none, 2.0, cfg);
    double margin = kInf;
    for (const auto& snap : res.solution.snapshots)
      for (int i = 0; i < res.solution.grid.size(); ++i)
        margin = std::min(
            margin, env.value(res.solution.grid[i], snap.t) - snap.u[i]);
    CheckResult c;
    c.name = "solver/discrete_comparison_principle";
    c.value = -margin;
    c.tol = 1e-6;
    c.pass = margin > 0;
    out.push_back(c);
    out.push_back(check_flag(
        "solver/nonnegativity_diagnostics",
        res.solution.clip_count == 0 && res.solution.min_before_clip >= -1e-14,
        "no clips, no undershoot beyond -1e-14"));
  }
  {
    // Truncation stability: doubling r_max at fixed spacing moves the halt
    // time by well under 1%.
    auto hyp = ModelManifold::hyperbolic(3, 1.0);
    auto none = RadialDriftField::none();
    Barrier phi = build_phi(hyp, none, 8.0, 0.0, 1.0, 1.0, 1.0);
    const double c = *phi.normalization();
    auto v = [&](double r) { return phi.value(r); };
    const double frac =
        c * (integrate_radial(v, hyp, 0.0, 1.0, QuadratureRule{}) +
             integrate_radial(v, hyp, 1.0, 8.0, QuadratureRule{}));
    const double A = 24.0 / frac;
    auto u0 = [A](double r) { return r < 8.0 ? A : 0.0; };
    auto run = [&](double r_max, int n_grid) {
      SolverConfig cfg;
      cfg.r_max = r_max;
      cfg.n_grid = n_grid;
      cfg.t_end = 0.2;
      auto res = simulate(u0, hyp, none, 2.0, cfg);
      return res.outcome.t_est;
    };
    const double t40 = run(40.0, 2048);
    const double t80 = run(80.0, 4096);
    out.push_back(check_leq("solver/domain_truncation_stability",
                            std::abs(t80 - t40) / t40, 0.01,
                            "blow-up halt time, r_max 40 vs 80"));
  }
}

// -------------------------------------------------------------- acceptance

json ac3_config() {
  auto hyp = ModelManifold::hyperbolic(3, 1.0);
  auto none = RadialDriftField::none();
  Barrier phi = build_phi(hyp, none, 8.0, 0.0, 1.0, 1.0, 1.0);
  const double c = *phi.normalization();
  auto v = [&](double r) { return phi.value(r); };
  const double frac =
      c * (integrate_radial(v, hyp, 0.0, 1.0, QuadratureRule{}) +
           integrate_radial(v, hyp, 1.0, 8.0, QuadratureRule{}));
  // mass = 3 x threshold = 24 for lambda = 8, p = 2.
  const double A = 24.0 / frac;

  json snaps = json::array();
  for (int i = 0; i <= 14; ++i) snaps.push_back(0.0025 * i);
  json cfg;
  cfg["schema_version"] = 1;
  cfg["name"] = "blowup-large-mass";
  cfg["theorem_tag"] = "thm_3_2";
  cfg["manifold"] = {{"kind", "hyperbolic"}, {"n", 3}, {"h", 1.0}};
  cfg["p"] = 2.0;
  cfg["initial_datum"] = {
      {"kind", "constant_on_ball"}, {"amplitude", A}, {"radius", 8.0}};
  cfg["barrier"] = {{"family", "phi"},
                    {"lambda", 8.0},
                    {"h2", 1.0},
                    {"r0", 1.0},
                    {"c1", 1.0}};
  cfg["solver"] = {{"r_max", 40.0},
                   {"n_grid", 4096},
                   {"t_end", 0.2},
                   {"snapshot_times", snaps}};
  return cfg;
}

struct TimeseriesRow {
  double t, sup_u, mass, dt;
};

std::vector<TimeseriesRow> read_timeseries(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw NumericError("cannot read " + path);
  std::vector<TimeseriesRow> rows;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    TimeseriesRow r{};
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &r.t, &r.sup_u, &r.mass,
                    &r.dt) == 4)
      rows.push_back(r);
  }
  return rows;
}

double sup_at(const std::vector<TimeseriesRow>& rows, double t) {
  for (const auto& r : rows)
    if (std::abs(r.t - t) <= 1e-12 * std::max(1.0, t)) return r.sup_u;
  return kNaN;
}

void check_ac3(std::vector<CheckResult>& out, const std::string& scratch) {
  const auto t0 = Clock::now();
  Report rep = run_scenario_json(ac3_config(), scratch + "/ac3");
  const json& body = rep.body;

  const double mass = body["verdicts"]["kaplan"]["mass"]["value"];
  const bool predicts = body["verdicts"]["kaplan"]["predicts_blowup"];
  out.push_back(check_leq("AC-3/mass_equals_three_thresholds",
                          std::abs(mass - 24.0) / 24.0, 1e-9,
                          "constructed weighted mass"));
  out.push_back(check_flag("AC-3/kaplan_predicts_blowup", predicts));

  const std::string kind = body["verdicts"]["outcome"]["kind"];
  const double t_est =
      kind == "blowup"
          ? body["verdicts"]["outcome"]["t_est"]["value"].get<double>()
          : kNaN;
  const double t_star = ode_blowup_time(mass, 8.0, 2.0);
  CheckResult c;
  c.name = "AC-3/halt_time_in_ode_bracket";
  c.value = t_est / t_star;
  c.tol = 1.2;
  c.pass = kind == "blowup" && t_est >= 0.5 * t_star && t_est <= 1.2 * t_star;
  std::ostringstream d;
  d << "t_est " << t_est << ", ode bound " << t_star;
  c.detail = d.str();
  out.push_back(c);

  // Discrete mass inequality d(mass)/dt >= mass^2 - lambda mass - tol at
  // guarded snapshots.
  auto rows = read_timeseries(scratch + "/ac3/blowup-large-mass/timeseries.csv");
  const auto& series = body["mass_series"]["values"];
  auto hyp = ModelManifold::hyperbolic(3, 1.0);
  auto none = RadialDriftField::none();
  Barrier phi = build_phi(hyp, none, 8.0, 0.0, 1.0, 1.0, 1.0);
  const double phi_edge = phi.value(40.0);
  double worst = -kInf;
  int pairs = 0;
  for (size_t i = 0; i + 1 < series.size(); ++i) {
    const double ta = series[i]["t"], tb = series[i + 1]["t"];
    const double ma = series[i]["mass"], mb = series[i + 1]["mass"];
    const double sup_a = sup_at(rows, ta), sup_b = sup_at(rows, tb);
    if (!(sup_a < 1e7 && sup_b < 1e7)) continue;
    if (!(phi_edge * sup_a < 1e-10)) continue;
    const double lhs = (mb - ma) / (tb - ta);
    const double rhs = ma * ma - 8.0 * ma;
    const double tol = 1e-2 * std::max(1.0, ma * ma);
    worst = std::max(worst, (rhs - tol - lhs) / std::max(1.0, std::abs(rhs)));
    ++pairs;
  }
  std::ostringstream d2;
  d2 << pairs << " snapshot pairs";
  CheckResult mi = check_leq("AC-3/discrete_mass_inequality", worst, 0.0,
                             d2.str());
  mi.pass = mi.pass && pairs >= 5;
  out.push_back(mi);
  out.push_back(check_leq("AC-3/runtime_s", seconds_since(t0), 60.0));
}

json ac4_config() {
  json snaps = json::array();
  for (int i = 0; i <= 20; ++i) snaps.push_back(0.5 * i);
  json cfg;
  cfg["schema_version"] = 1;
  cfg["name"] = "global-small-data";
  cfg["theorem_tag"] = "thm_4_2";
  cfg["manifold"] = {{"kind", "hyperbolic"}, {"n", 3}, {"h", 1.0}};
  cfg["p"] = 2.0;
  // c_tilde = 0.9 lambda^{1/(p-1)}; datum = 0.9 c_tilde w.
  cfg["envelope"] = {{"c_tilde", 0.675}};
  cfg["initial_datum"] = {
      {"kind", "barrier_multiple"}, {"family", "w"}, {"factor", 0.6075}};
  cfg["barrier"] = {{"family", "w"}, {"lambda", 0.75}};
  cfg["solver"] = {{"r_max", 40.0},
                   {"n_grid", 2048},
                   {"t_end", 10.0},
                   {"snapshot_times", snaps}};
  return cfg;
}

void check_ac4(std::vector<CheckResult>& out, const std::string& scratch) {
  const auto t0 = Clock::now();
  Report rep = run_scenario_json(ac4_config(), scratch + "/ac4");
  const json& o = rep.body["verdicts"]["outcome"];
  const bool global = o["kind"] == "global_up_to" &&
                      o["horizon"].get<double>() >= 10.0 * (1 - 1e-12);
  const double margin =
      o.contains("envelope_margin") ? o["envelope_margin"]["value"].get<double>()
                                    : -kInf;
  out.push_back(check_flag("AC-4/global_up_to_horizon", global));
  CheckResult cm;
  cm.name = "AC-4/envelope_margin_positive";
  cm.value = margin;
  cm.tol = 0.0;
  cm.pass = margin > 0.0;
  out.push_back(cm);

  auto rows =
      read_timeseries(scratch + "/ac4/global-small-data/timeseries.csv");
  bool decreasing = true;
  double prev = kNaN;
  for (const auto& r : rows) {
    if (r.t <= 1.0) continue;
    if (std::isfinite(prev) && r.sup_u > prev * (1.0 + 1e-10))
      decreasing = false;
    prev = r.sup_u;
  }
  out.push_back(check_flag("AC-4/supremum_decreasing_after_t1", decreasing));
  out.push_back(check_leq("AC-4/runtime_s", seconds_since(t0), 60.0));
}

void check_ac6(std::vector<CheckResult>& out, const std::string& scratch) {
  const auto t0 = Clock::now();
  {
    ExponentRanges e = exponent_ranges(3, 1.0, 0.0);
    // 5/3 as produced by the defining formula 1 + 2/(gamma (n-1) + 1).
    out.push_back(check_flag(
        "AC-6/exponent_bounds_exact",
        e.fujita_nonexistence_upper == 1.0 + 2.0 / 3.0 &&
            e.existence_lower == e.fujita_nonexistence_upper,
        "both bounds equal 5/3 bit-exactly"));
  }
  auto eu = ModelManifold::euclidean(3);
  auto none = RadialDriftField::none();
  bool certified_all = true;
  for (double A : {1e-2, 1e-1, 1.0}) {
    auto u0 = [A](double r) { return A * std::exp(-r * r); };
    SmallAResult sr = find_small_a(u0, eu, none, 0.0, 0.0, 1.0, 1.5, 1.0);
    certified_all = certified_all && sr.certified &&
                    sr.verdict.predicts_blowup;
  }
  out.push_back(check_flag("AC-6/subcritical_certification", certified_all,
                           "find_small_a at amplitudes 1e-2, 1e-1, 1"));

  // Sweep over (p, amplitude) and read the phase CSV back.
  json cfg;
  cfg["schema_version"] = 1;
  cfg["name"] = "fujita-euclidean";
  cfg["theorem_tag"] = "freeform";
  cfg["manifold"] = {{"kind", "euclidean"}, {"n", 3}};
  cfg["p"] = 1.5;
  cfg["initial_datum"] = {
      {"kind", "gaussian"}, {"amplitude", 1.0}, {"width", 1.0}};
  cfg["barrier"] = {{"family", "gaussian_super"}, {"epsilon", 0.2}, {"t0", 1.0}};
  json snaps = json::array();
  for (int i = 0; i <= 10; ++i) snaps.push_back(1.0 * i);
  cfg["solver"] = {{"r_max", 80.0},
                   {"n_grid", 512},
                   {"t_end", 10.0},
                   {"snapshot_times", snaps}};
  cfg["sweep"] = {{"p_values", {1.5, 2.0}},
                  {"amplitudes", {1e-3, 1e-2, 1e-1, 1.0}}};
  const std::string dir = scratch + "/ac6";
  fs::create_directories(dir);
  const std::string cfg_path = dir + "/sweep.json";
  {
    std::ofstream f(cfg_path);
    f << cfg.dump(2) << "\n";
  }
  const std::string csv = sweep_file(cfg_path, dir);

  std::map<std::pair<double, double>, std::string> cell;
  {
    std::ifstream in(csv);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      std::istringstream ss(line);
      std::string pv, av, outc;
      std::getline(ss, pv, ',');
      std::getline(ss, av, ',');
      std::getline(ss, outc, ',');
      cell[{std::stod(pv), std::stod(av)}] = outc;
    }
  }
  const bool blow_cells = cell[{1.5, 1e-2}] == "blowup" &&
                          cell[{1.5, 1e-1}] == "blowup" &&
                          cell[{1.5, 1.0}] == "blowup";
  const bool global_cell = cell[{2.0, 1e-3}] == "global";
  out.push_back(check_flag("AC-6/sweep_subcritical_blowup_cells", blow_cells,
                           "p = 1.5, amplitudes 1e-2, 1e-1, 1"));
  out.push_back(check_flag("AC-6/sweep_supercritical_small_data_global",
                           global_cell, "p = 2, amplitude 1e-3"));
  out.push_back(check_leq("AC-6/runtime_s", seconds_since(t0), 600.0));
}

void check_ac8(std::vector<CheckResult>& out, const std::string& scratch) {
  const std::string dir = scratch + "/ac8";
  fs::create_directories(dir);
  const std::string cfg_path = dir + "/config.json";
  {
    std::ofstream f(cfg_path);
    f << ac3_config().dump(2) << "\n";
  }
  Report a = run_scenario_file(cfg_path, dir + "/run1");
  Report b = run_scenario_file(cfg_path, dir + "/run2");

  auto read_bytes = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  bool identical = true;
  int compared = 0;
  const fs::path da = fs::path(dir) / "run1" / "blowup-large-mass";
  const fs::path db = fs::path(dir) / "run2" / "blowup-large-mass";
  for (const auto& entry : fs::directory_iterator(da)) {
    if (entry.path().extension() != ".csv") continue;
    const fs::path other = db / entry.path().filename();
    identical = identical && fs::exists(other) &&
                read_bytes(entry.path()) == read_bytes(other);
    ++compared;
  }
  std::ostringstream d;
  d << compared << " CSV files byte-compared";
  out.push_back(check_flag("AC-8/bit_identical_rerun",
                           identical && compared >= 2, d.str()));
}

void suite_acceptance(std::vector<CheckResult>& out,
                      const std::string& scratch) {
  check_ac1(out);
  check_ac2(out);
  check_ac3(out, scratch);
  check_ac4(out, scratch);
  check_ac5(out);
  check_ac6(out, scratch);
  check_ac7(out);
  check_ac8(out, scratch);
}

}  // namespace

std::vector<CheckResult> run_suite(const std::string& suite,
                                   const std::string& scratch_dir) {
  std::vector<CheckResult> out;
  if (suite == "geometry") {
    suite_geometry(out);
    check_ac1(out);
  } else if (suite == "barriers") {
    suite_barriers(out);
  } else if (suite == "criteria") {
    suite_criteria(out);
  } else if (suite == "solver") {
    suite_solver(out);
  } else if (suite == "acceptance") {
    suite_acceptance(out, scratch_dir);
  } else if (suite == "all") {
    suite_geometry(out);
    check_ac1(out);
    suite_barriers(out);
    suite_criteria(out);
    suite_solver(out);
    check_ac3(out, scratch_dir);
    check_ac4(out, scratch_dir);
    check_ac6(out, scratch_dir);
    check_ac8(out, scratch_dir);
  } else {
    throw UsageError(
        "unknown verify suite '" + suite +
        "'; available: geometry, barriers, criteria, solver, acceptance, all");
  }
  return out;
}

int print_suite(const std::string& suite, std::ostream& os,
                const std::string& scratch_dir) {
  const auto results = run_suite(suite, scratch_dir);
  int failures = 0;
  for (const auto& r : results) {
    os << (r.pass ? "[PASS] " : "[FAIL] ") << r.name
       << ": value=" << format_g17(r.value) << " tol=" << format_g17(r.tol);
    if (!r.detail.empty()) os << " (" << r.detail << ")";
    os << "\n";
    if (!r.pass) ++failures;
  }
  os << (failures == 0 ? "all checks passed" : "FAILURES present") << " ("
     << results.size() << " checks, " << failures << " failed)\n";
  return failures;
}

}  // namespace heatlab
