#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "heatlab/solver.hpp"

using namespace heatlab;

namespace {

RadialSolution make_state(double r_max, int n,
                          const std::function<double(double)>& f) {
  RadialSolution s;
  s.grid = Eigen::ArrayXd::LinSpaced(n, 0.0, r_max);
  s.values.resize(n);
  for (int i = 0; i < n; ++i) s.values[i] = f(s.grid[i]);
  return s;
}

}  // namespace

TEST_CASE("spatial operator on constants and quadratics") {
  auto m = ModelManifold::euclidean(3);
  auto b = RadialDriftField::none();

  auto flat = make_state(10.0, 101, [](double) { return 3.0; });
  Eigen::ArrayXd Lf = apply_spatial_operator(flat, m, b);
  for (int i = 0; i + 1 < Lf.size(); ++i)
    CHECK(Lf[i] == doctest::Approx(0.0).epsilon(1e-12));

  // D(r^2) = 2n = 6 on R^3; central differences are exact on quadratics.
  auto quad = make_state(10.0, 101, [](double r) { return r * r; });
  Eigen::ArrayXd Lq = apply_spatial_operator(quad, m, b);
  CHECK(Lq[0] == doctest::Approx(6.0).epsilon(1e-10));
  for (int i = 1; i + 1 < Lq.size(); ++i)
    CHECK(Lq[i] == doctest::Approx(6.0).epsilon(1e-9));
}

TEST_CASE("spatial operator with inverse-radius drift") {
  auto m = ModelManifold::euclidean(3);
  auto drift = RadialDriftField::inverse_r(-1.0);
  const int n = 4097;
  auto st = make_state(4.0, n, [](double r) { return std::exp(-r * r / 4.0); });
  Eigen::ArrayXd L = apply_spatial_operator(st, m, drift);
  // Node at r = 1; analytic u'' + ((n-1+nu)/r) u' with u = e^{-r^2/4}.
  const int i = (n - 1) / 4;
  REQUIRE(st.grid[i] == doctest::Approx(1.0));
  const double u = std::exp(-0.25);
  const double expect = (-0.5 + 0.25) * u + (2.0 - 1.0) * (-0.5 * u);
  CHECK(L[i] == doctest::Approx(expect).epsilon(1e-6));

  // nu <= -n leaves the origin without a regularized stencil.
  auto bad = RadialDriftField::inverse_r(-3.0);
  CHECK_THROWS_AS(apply_spatial_operator(st, m, bad), ConfigError);
}

TEST_CASE("zero datum stays zero") {
  auto m = ModelManifold::euclidean(3);
  auto b = RadialDriftField::none();
  SolverConfig cfg;
  cfg.r_max = 20.0;
  cfg.n_grid = 64;
  cfg.t_end = 0.5;
  cfg.snapshot_times = {0.0, 0.25, 0.5};
  auto res = simulate([](double) { return 0.0; }, m, b, 2.0, cfg);
  CHECK(res.outcome.kind == Outcome::Kind::global_up_to);
  CHECK(res.solution.values.maxCoeff() == 0.0);
  CHECK(res.solution.clip_count == 0);
  CHECK(res.solution.snapshots.size() == 3);
}

TEST_CASE("flat datum tracks the reaction ODE") {
  auto m = ModelManifold::euclidean(3);
  auto b = RadialDriftField::none();
  SolverConfig cfg;
  cfg.r_max = 40.0;
  cfg.n_grid = 512;
  cfg.t_end = 1.0;
  cfg.safety = 0.25;
  auto res = simulate([](double) { return 10.0; }, m, b, 2.0, cfg);
  CHECK(res.outcome.kind == Outcome::Kind::blowup);
  // Center dynamics are pure y' = y^2 until the edge arrives: T = 1/10.
  CHECK(res.outcome.t_est == doctest::Approx(0.1).epsilon(0.05));
  CHECK(res.solution.clip_count == 0);
  CHECK(res.solution.min_before_clip >= -1e-14);
}

TEST_CASE("negative datum is rejected") {
  auto m = ModelManifold::euclidean(3);
  auto b = RadialDriftField::none();
  SolverConfig cfg;
  cfg.n_grid = 32;
  cfg.t_end = 0.1;
  CHECK_THROWS_AS(simulate([](double) { return -1.0; }, m, b, 2.0, cfg),
                  ParameterError);
}

TEST_CASE("mass series of snapshots") {
  auto m = ModelManifold::euclidean(3);
  auto bnone = RadialDriftField::none();
  Barrier eta = build_eta(m, bnone, 0.1, 0.6, 0.0, 0.0);

  SolverConfig cfg;
  cfg.r_max = 60.0;
  cfg.n_grid = 2048;
  cfg.t_end = 0.2;
  cfg.snapshot_times = {0.0, 0.1, 0.2};
  const double A = 0.3;
  auto res =
      simulate([&](double) { return A; }, m, bnone, 2.0, cfg, &eta);
  auto series = mass_series(res.solution, eta, m);
  REQUIRE(series.size() == 3);
  // Constant datum at t = 0: mass equals the constant (normalization).
  CHECK(series[0].second == doctest::Approx(A).epsilon(1e-6));
  // History mass column agrees with the snapshot quadrature.
  CHECK(res.solution.history.front().mass ==
        doctest::Approx(series[0].second).epsilon(1e-12));

  auto zero = simulate([](double) { return 0.0; }, m, bnone, 2.0, cfg, &eta);
  for (auto& [t, mass] : mass_series(zero.solution, eta, m))
    CHECK(mass == 0.0);
}

TEST_CASE("comparison with a certified envelope") {
  auto m = ModelManifold::hyperbolic(3, 1.0);
  auto b = RadialDriftField::none();
  Barrier w = build_w(m, b, 0.75);
  const double c_tilde = 0.9 * kaplan_threshold(0.75, 2.0);
  Envelope env = make_envelope(0.75, 2.0, c_tilde, w);

  SolverConfig cfg;
  cfg.r_max = 40.0;
  cfg.n_grid = 512;
  cfg.t_end = 2.0;
  cfg.snapshot_times = {0.0, 0.5, 1.0, 1.5, 2.0};
  auto res = simulate([&](double r) { return 0.9 * c_tilde * w.value(r); }, m,
                      b, 2.0, cfg);
  REQUIRE(res.solution.halt == HaltReason::reached_t_end);

  RadialTimeFn env_fn = [&](double r, double t) { return env.value(r, t); };
  Outcome out = classify_outcome(res.solution, &env_fn);
  CHECK(out.kind == Outcome::Kind::global_up_to);
  CHECK(out.envelope_margin > 0.0);

  // Discrete comparison principle at every snapshot.
  for (const auto& snap : res.solution.snapshots)
    for (int i = 0; i < res.solution.grid.size(); ++i)
      CHECK(snap.u[i] <= env.value(res.solution.grid[i], snap.t) + 1e-6);
}

TEST_CASE("manufactured solution converges at second order") {
  auto m = ModelManifold::euclidean(3);
  auto b = RadialDriftField::none();
  const double R = 10.0;
  const double k = kPi / (2.0 * R);
  auto exact = [&](double r, double t) {
    return std::exp(-t) * std::cos(k * r);
  };
  // Source for u_t = D u + s with the exact solution above.
  RadialTimeFn source = [&](double r, double t) {
    if (r == 0.0) return std::exp(-t) * (3.0 * k * k - 1.0);
    return std::exp(-t) * ((k * k - 1.0) * std::cos(k * r) +
                           (2.0 / r) * k * std::sin(k * r));
  };

  auto error_at = [&](int n_grid) {
    SolverConfig cfg;
    cfg.r_max = R;
    cfg.n_grid = n_grid;
    cfg.t_end = 0.25;
    cfg.scheme = Scheme::imex_cn;
    auto res = simulate_linear_forced([&](double r) { return exact(r, 0.0); },
                                      m, b, source, cfg);
    double err = 0.0;
    for (int i = 0; i < res.solution.grid.size(); ++i)
      err = std::max(err, std::abs(res.solution.values[i] -
                                   exact(res.solution.grid[i], 0.25)));
    return err;
  };

  const double e256 = error_at(256);
  const double e512 = error_at(512);
  CHECK(e256 / e512 >= 3.7);
}

TEST_CASE("comparison principle holds for random data under the supersolution") {
  auto m = ModelManifold::euclidean(3);
  auto b = RadialDriftField::none();
  Barrier g = build_gaussian_super(m, b, 2.0, 0.2, 1.0);
  REQUIRE(g.certificate().pass());

  std::mt19937 rng(42);
  std::uniform_real_distribution<double> uw(0.5, 2.0), uf(0.05, 0.9);
  for (int trial = 0; trial < 5; ++trial) {
    const double width = uw(rng);
    // Keep the datum below the supersolution at t = 0: the profile
    // e^{-(r/width)^2} sits under e^{-r^2/(4 t0)} whenever width <= 2 sqrt(t0),
    // so a sub-cap amplitude suffices.
    const double amp = uf(rng) * g.value(0.0, 0.0);
    auto u0 = [&](double r) { return amp * std::exp(-(r / width) * (r / width)); };

    SolverConfig cfg;
    cfg.r_max = 60.0;
    cfg.n_grid = 512;
    cfg.t_end = 5.0;
    cfg.snapshot_times = {0.0, 1.0, 2.5, 5.0};
    auto res = simulate(u0, m, b, 2.0, cfg);
    REQUIRE(res.solution.halt == HaltReason::reached_t_end);
    for (const auto& snap : res.solution.snapshots)
      for (int i = 0; i < res.solution.grid.size(); ++i)
        CHECK(snap.u[i] <= g.value(res.solution.grid[i], snap.t) + 1e-6);
  }
}

TEST_CASE("geometrically graded grids") {
  auto m = ModelManifold::euclidean(3);
  auto b = RadialDriftField::none();

  // The nonuniform three-point stencil stays exact on quadratics.
  const int n = 201;
  RadialSolution st;
  st.grid.resize(n);
  for (int i = 0; i < n; ++i)
    st.grid[i] = 10.0 * std::pow(i / (n - 1.0), 2.0);
  st.values = st.grid * st.grid;
  Eigen::ArrayXd L = apply_spatial_operator(st, m, b);
  for (int i = 0; i + 1 < n; ++i)
    CHECK(L[i] == doctest::Approx(6.0).epsilon(1e-7));

  SolverConfig cfg;
  cfg.r_max = 30.0;
  cfg.n_grid = 256;
  cfg.t_end = 0.5;
  cfg.grading = 2.0;
  cfg.snapshot_times = {0.0, 0.5};
  auto res = simulate([](double r) { return 0.1 * std::exp(-r * r); }, m, b,
                      2.0, cfg);
  CHECK(res.solution.grid[1] < 30.0 / 255.0);  // clustered near the origin
  CHECK(res.outcome.kind == Outcome::Kind::global_up_to);
  CHECK(res.solution.clip_count == 0);

  SolverConfig bad = cfg;
  bad.grading = 0.5;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("outcome classification rules") {
  RadialSolution sol;
  sol.grid = Eigen::ArrayXd::LinSpaced(8, 0.0, 1.0);
  sol.values = Eigen::ArrayXd::Zero(8);
  sol.t = 3.0;
  sol.halt = HaltReason::hit_u_cap;
  sol.history = {{0.0, 1.0, 0.0, 0.0}, {3.0, 1e8, 0.0, 1e-3}};
  Outcome o = classify_outcome(sol);
  CHECK(o.kind == Outcome::Kind::blowup);
  CHECK(o.t_est == 3.0);

  sol.halt = HaltReason::reached_t_end;
  sol.history = {{0.0, 1.0, 0.0, 0.0}, {0.3, 2.0, 0.0, 0.1},
                 {3.0, 8.0, 0.0, 0.1}};
  Outcome o2 = classify_outcome(sol);
  CHECK(o2.kind == Outcome::Kind::inconclusive);  // sup doubled in the decade

  sol.history = {{0.0, 1.0, 0.0, 0.0}, {0.3, 0.9, 0.0, 0.1},
                 {3.0, 0.5, 0.0, 0.1}};
  Outcome o3 = classify_outcome(sol);
  CHECK(o3.kind == Outcome::Kind::global_up_to);
}
