#include "heatlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace heatlab {

namespace {

constexpr double kClipTol = 1e-14;

void thomas_solve(Eigen::ArrayXd& sub, Eigen::ArrayXd& diag,
                  Eigen::ArrayXd& sup, Eigen::ArrayXd& rhs) {
  const int n = static_cast<int>(diag.size());
  for (int i = 1; i < n; ++i) {
    const double w = sub[i] / diag[i - 1];
    diag[i] -= w * sup[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (int i = n - 2; i >= 0; --i)
    rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / diag[i];
}

bool grid_is_uniform(const Eigen::ArrayXd& r) {
  const int n = static_cast<int>(r.size());
  const double h0 = r[1] - r[0];
  for (int i = 1; i + 1 < n; ++i)
    if (std::abs((r[i + 1] - r[i]) - h0) > 1e-12 * h0) return false;
  return true;
}

// Composite Simpson weights on a uniform grid (3/8 rule on the final cell
// block when the interval count is odd).
Eigen::ArrayXd simpson_weights(int n, double dr) {
  Eigen::ArrayXd w = Eigen::ArrayXd::Zero(n);
  const int intervals = n - 1;
  int even_end = intervals % 2 == 0 ? n - 1 : n - 4;
  if (n < 4) even_end = intervals % 2 == 0 ? n - 1 : 0;
  for (int i = 0; i + 2 <= even_end; i += 2) {
    w[i] += dr / 3.0;
    w[i + 1] += 4.0 * dr / 3.0;
    w[i + 2] += dr / 3.0;
  }
  if (intervals % 2 != 0 && n >= 4) {
    w[n - 4] += 3.0 * dr / 8.0;
    w[n - 3] += 9.0 * dr / 8.0;
    w[n - 2] += 9.0 * dr / 8.0;
    w[n - 1] += 3.0 * dr / 8.0;
  }
  return w;
}

// Simpson on uniform grids, trapezoid on graded (or very short) ones.
Eigen::ArrayXd nodal_quadrature_weights(const Eigen::ArrayXd& r) {
  const int n = static_cast<int>(r.size());
  if (n >= 4 && grid_is_uniform(r)) return simpson_weights(n, r[1] - r[0]);
  Eigen::ArrayXd w = Eigen::ArrayXd::Zero(n);
  for (int i = 0; i + 1 < n; ++i) {
    const double h = r[i + 1] - r[i];
    w[i] += 0.5 * h;
    w[i + 1] += 0.5 * h;
  }
  return w;
}

struct Discretization {
  Eigen::ArrayXd r;
  Eigen::ArrayXd lo, di, up;  // rows of L: lo u_{i-1} + di u_i + up u_{i+1}
  double dr = 0;       // smallest spacing
  double dr_mean = 0;  // mean spacing; the linear part is implicit, so the
                       // dt cap is an accuracy bound at this scale
  double d_eff = 0;
  int n = 0;

  Discretization(const ModelManifold& m, const RadialDriftField& drift,
                 const SolverConfig& cfg) {
    n = cfg.n_grid;
    if (cfg.grading == 1.0) {
      r = Eigen::ArrayXd::LinSpaced(n, 0.0, cfg.r_max);
    } else {
      r.resize(n);
      for (int i = 0; i < n; ++i)
        r[i] = cfg.r_max * std::pow(i / (n - 1.0), cfg.grading);
    }
    build(m, drift);
  }

  Discretization(const ModelManifold& m, const RadialDriftField& drift,
                 const Eigen::ArrayXd& grid)
      : r(grid) {
    n = static_cast<int>(grid.size());
    build(m, drift);
  }

  void build(const ModelManifold& m, const RadialDriftField& drift) {
    d_eff = m.dim() + drift.r_times_value_limit();
    if (!(d_eff >= 1.0)) {
      std::ostringstream msg;
      msg << "solver: effective origin dimension n + lim r b(r) = " << d_eff
          << " must be >= 1";
      throw ConfigError(msg.str());
    }
    lo.setZero(n);
    di.setZero(n);
    up.setZero(n);
    dr = kInf;
    for (int i = 0; i + 1 < n; ++i) dr = std::min(dr, r[i + 1] - r[i]);
    dr_mean = (r[n - 1] - r[0]) / (n - 1);
    // Regularized origin stencil: D u(0) ~ 2 d_eff (u_1 - u_0) / h0^2.
    const double h0 = r[1] - r[0];
    di[0] = -2.0 * d_eff / (h0 * h0);
    up[0] = 2.0 * d_eff / (h0 * h0);
    // Interior: three-point formulas on a possibly nonuniform grid; exact
    // for quadratics, second order under smooth grading.
    for (int i = 1; i + 1 < n; ++i) {
      const double hm = r[i] - r[i - 1];
      const double hp = r[i + 1] - r[i];
      const double c = m.mean_curvature(r[i]) + drift.value(r[i]);
      lo[i] = 2.0 / (hm * (hm + hp)) - c * hp / (hm * (hm + hp));
      di[i] = -2.0 / (hm * hp) + c * (hp - hm) / (hm * hp);
      up[i] = 2.0 / (hp * (hm + hp)) + c * hm / (hp * (hm + hp));
    }
  }

  // L u for all nodes; boundary row is zero.
  void apply(const Eigen::ArrayXd& u, Eigen::ArrayXd& out) const {
    out.resize(n);
    out[0] = di[0] * u[0] + up[0] * u[1];
    for (int i = 1; i < n - 1; ++i)
      out[i] = lo[i] * u[i - 1] + di[i] * u[i] + up[i] * u[i + 1];
    out[n - 1] = 0;
  }

  // Fill the tridiagonal system (I - theta dt L) over the unknown nodes
  // 0..n-2 (the outer node stays pinned at zero).
  void fill_system(double theta_dt, Eigen::ArrayXd& sub, Eigen::ArrayXd& diag,
                   Eigen::ArrayXd& sup) const {
    const int m = n - 1;
    sub.resize(m);
    diag.resize(m);
    sup.resize(m);
    for (int i = 0; i < m; ++i) {
      sub[i] = -theta_dt * lo[i];
      diag[i] = 1.0 - theta_dt * di[i];
      sup[i] = -theta_dt * up[i];
    }
    sup[m - 1] = 0;  // neighbor is the pinned boundary node
  }
};

struct MassWeights {
  Eigen::ArrayXd w;  // quadrature weight * normalization * barrier * area
  bool active = false;

  MassWeights(const Discretization& d, const ModelManifold& m,
              const Barrier* barrier) {
    if (barrier == nullptr || !barrier->normalization()) return;
    active = true;
    const double norm = *barrier->normalization();
    const double omega = unit_sphere_area(m.dim());
    const Eigen::ArrayXd q = nodal_quadrature_weights(d.r);
    w.resize(d.n);
    for (int i = 0; i < d.n; ++i) {
      const double psi_pow =
          d.r[i] > 0 ? std::pow(m.psi(d.r[i]), m.dim() - 1) : 0.0;
      w[i] = q[i] * norm * omega * barrier->value(d.r[i]) * psi_pow;
    }
  }

  double mass(const Eigen::ArrayXd& u) const {
    return active ? (w * u).sum() : 0.0;
  }
};

struct StepContext {
  const SolverConfig& cfg;
  const Discretization& disc;
  RadialSolution& sol;
  Eigen::ArrayXd sub, diag, sup, rhs, lu;
  std::vector<double> snaps;  // pending snapshot times, ascending
  size_t next_snap = 0;

  StepContext(const SolverConfig& c, const Discretization& d,
              RadialSolution& s)
      : cfg(c), disc(d), sol(s) {
    snaps = c.snapshot_times;
    std::sort(snaps.begin(), snaps.end());
    snaps.erase(std::unique(snaps.begin(), snaps.end()), snaps.end());
    for (double t : snaps)
      if (t < 0 || t > c.t_end * (1 + 1e-12))
        throw ConfigError("solver: snapshot time outside [0, t_end]");
    if (!snaps.empty() && snaps.front() == 0.0) {
      sol.snapshots.push_back({0.0, sol.values});
      next_snap = 1;
    }
  }

  double clamp_dt(double dt) {
    dt = std::min(dt, cfg.t_end - sol.t);
    if (next_snap < snaps.size())
      dt = std::min(dt, snaps[next_snap] - sol.t);
    return dt;
  }

  void after_step() {
    if (next_snap < snaps.size() &&
        sol.t >= snaps[next_snap] * (1.0 - 1e-15)) {
      sol.snapshots.push_back({sol.t, sol.values});
      ++next_snap;
    }
  }

  // Implicit linear solve; explicit_term already contains dt * f.
  void advance(double dt, const Eigen::ArrayXd& explicit_term) {
    const int m = disc.n - 1;
    const double theta = cfg.scheme == Scheme::imex_cn ? 0.5 : 1.0;
    disc.fill_system(theta * dt, sub, diag, sup);
    rhs.resize(m);
    if (cfg.scheme == Scheme::imex_cn) {
      disc.apply(sol.values, lu);
      for (int i = 0; i < m; ++i)
        rhs[i] = sol.values[i] + 0.5 * dt * lu[i] + explicit_term[i];
    } else {
      for (int i = 0; i < m; ++i) rhs[i] = sol.values[i] + explicit_term[i];
    }
    thomas_solve(sub, diag, sup, rhs);
    for (int i = 0; i < m; ++i) sol.values[i] = rhs[i];
    sol.values[m] = 0.0;
    // Nonnegativity: clip roundoff fuzz silently, count real undershoots.
    for (int i = 0; i < m; ++i) {
      if (sol.values[i] < 0) {
        sol.min_before_clip = std::min(sol.min_before_clip, sol.values[i]);
        if (sol.values[i] < -kClipTol) ++sol.clip_count;
        sol.values[i] = 0.0;
      }
    }
    sol.t += dt;
  }
};

RadialSolution init_solution(const RadialFn& u0, const Discretization& d) {
  RadialSolution sol;
  sol.grid = d.r;
  sol.values.resize(d.n);
  for (int i = 0; i < d.n; ++i) sol.values[i] = u0(d.r[i]);
  sol.values[d.n - 1] = 0.0;
  for (int i = 0; i < d.n; ++i) {
    if (!(sol.values[i] >= 0))
      throw ParameterError("simulate: initial datum must be nonnegative");
  }
  return sol;
}

}  // namespace

void SolverConfig::validate() const {
  if (!(r_max > 0)) throw ConfigError("solver: r_max > 0 required");
  if (n_grid < 16) throw ConfigError("solver: n_grid >= 16 required");
  if (!(t_end > 0)) throw ConfigError("solver: t_end > 0 required");
  if (!(u_cap > 1)) throw ConfigError("solver: u_cap > 1 required");
  if (!(safety > 0 && safety <= 1))
    throw ConfigError("solver: safety in (0, 1] required");
  if (!(grading >= 1.0 && grading <= 5.0))
    throw ConfigError("solver: grading in [1, 5] required");
  if (!(dt_min > 0)) throw ConfigError("solver: dt_min > 0 required");
}

Eigen::ArrayXd apply_spatial_operator(const RadialSolution& sol,
                                      const ModelManifold& m,
                                      const RadialDriftField& drift) {
  if (sol.grid.size() < 3)
    throw ConfigError("apply_spatial_operator: at least 3 grid nodes required");
  Discretization d(m, drift, sol.grid);
  Eigen::ArrayXd out;
  d.apply(sol.values, out);
  return out;
}

SimulateResult simulate(const RadialFn& u0, const ModelManifold& m,
                        const RadialDriftField& drift, double p,
                        const SolverConfig& cfg, const Barrier* mass_barrier) {
  cfg.validate();
  if (!(p > 1)) throw ParameterError("simulate: p > 1 required");
  Discretization disc(m, drift, cfg);
  RadialSolution sol = init_solution(u0, disc);
  MassWeights mw(disc, m, mass_barrier);
  StepContext ctx(cfg, disc, sol);

  const double dt_diff = 0.5 * disc.dr_mean * disc.dr_mean;
  const int unknowns = disc.n - 1;
  Eigen::ArrayXd expl(unknowns);
  sol.history.push_back({0.0, sol.values.maxCoeff(), mw.mass(sol.values), 0.0});

  while (true) {
    const double sup = sol.values.maxCoeff();
    if (!std::isfinite(sup)) {
      std::ostringstream msg;
      msg << "simulate: non-finite state at t = " << sol.t;
      throw NumericError(msg.str());
    }
    if (sup >= cfg.u_cap) {
      sol.halt = HaltReason::hit_u_cap;
      break;
    }
    if (sol.t >= cfg.t_end * (1.0 - 1e-15)) {
      sol.halt = HaltReason::reached_t_end;
      break;
    }
    double dt = dt_diff;
    if (sup > 0) dt = std::min(dt, 0.1 * std::pow(sup, 1.0 - p));
    dt *= cfg.safety;
    dt = ctx.clamp_dt(dt);
    if (dt < cfg.dt_min) {
      sol.halt = HaltReason::dt_underflow;
      break;
    }
    for (int i = 0; i < unknowns; ++i)
      expl[i] = dt * std::pow(sol.values[i], p);
    ctx.advance(dt, expl);
    ctx.after_step();
    sol.history.push_back(
        {sol.t, sol.values.maxCoeff(), mw.mass(sol.values), dt});
  }

  sol.boundary_flux = std::abs(sol.values[disc.n - 2]) /
                      (disc.r[disc.n - 1] - disc.r[disc.n - 2]);
  SimulateResult res{std::move(sol), {}};
  res.outcome = classify_outcome(res.solution);
  return res;
}

SimulateResult simulate_linear_forced(const RadialFn& u0,
                                      const ModelManifold& m,
                                      const RadialDriftField& drift,
                                      const RadialTimeFn& source,
                                      const SolverConfig& cfg) {
  cfg.validate();
  Discretization disc(m, drift, cfg);
  RadialSolution sol = init_solution(u0, disc);
  StepContext ctx(cfg, disc, sol);

  const double dt_diff = 0.5 * disc.dr_mean * disc.dr_mean;
  const int unknowns = disc.n - 1;
  Eigen::ArrayXd expl(unknowns);
  sol.history.push_back({0.0, sol.values.maxCoeff(), 0.0, 0.0});

  while (sol.t < cfg.t_end * (1.0 - 1e-15)) {
    double dt = ctx.clamp_dt(cfg.safety * dt_diff);
    if (dt < cfg.dt_min) {
      sol.halt = HaltReason::dt_underflow;
      break;
    }
    const double ts =
        cfg.scheme == Scheme::imex_cn ? sol.t + 0.5 * dt : sol.t;
    for (int i = 0; i < unknowns; ++i)
      expl[i] = dt * source(disc.r[i], ts);
    ctx.advance(dt, expl);
    ctx.after_step();
    sol.history.push_back({sol.t, sol.values.maxCoeff(), 0.0, dt});
    if (!std::isfinite(sol.values.maxCoeff()))
      throw NumericError("simulate_linear_forced: non-finite state");
  }

  sol.boundary_flux = std::abs(sol.values[disc.n - 2]) /
                      (disc.r[disc.n - 1] - disc.r[disc.n - 2]);
  SimulateResult res{std::move(sol), {}};
  res.outcome = classify_outcome(res.solution);
  return res;
}

std::vector<std::pair<double, double>> mass_series(const RadialSolution& sol,
                                                   const Barrier& barrier,
                                                   const ModelManifold& m) {
  if (!barrier.normalization())
    throw UsageError("mass_series: barrier carries no normalization");
  const int n = static_cast<int>(sol.grid.size());
  const double norm = *barrier.normalization();
  const double omega = unit_sphere_area(m.dim());
  const Eigen::ArrayXd q = nodal_quadrature_weights(sol.grid);
  Eigen::ArrayXd w(n);
  for (int i = 0; i < n; ++i) {
    const double psi_pow =
        sol.grid[i] > 0 ? std::pow(m.psi(sol.grid[i]), m.dim() - 1) : 0.0;
    w[i] = q[i] * norm * omega * barrier.value(sol.grid[i]) * psi_pow;
  }
  std::vector<std::pair<double, double>> out;
  out.reserve(sol.snapshots.size());
  for (const auto& snap : sol.snapshots)
    out.emplace_back(snap.t, (w * snap.u).sum());
  return out;
}

Outcome classify_outcome(const RadialSolution& sol,
                         const RadialTimeFn* envelope) {
  Outcome o;
  switch (sol.halt) {
    case HaltReason::hit_u_cap:
      o.kind = Outcome::Kind::blowup;
      o.t_est = sol.t;
      o.reason = "supremum reached the blow-up cap";
      return o;
    case HaltReason::dt_underflow: {
      // Blow-up only when the supremum was still increasing.
      const size_t n = sol.history.size();
      const double last = sol.history.back().sup_u;
      const double earlier =
          sol.history[n > 10 ? n - 10 : 0].sup_u;
      if (last > earlier) {
        o.kind = Outcome::Kind::blowup;
        o.t_est = sol.t;
        o.reason = "time step collapsed while the supremum was increasing";
      } else {
        o.kind = Outcome::Kind::inconclusive;
        o.reason = "time step collapsed without growth";
      }
      return o;
    }
    case HaltReason::reached_t_end:
      break;
  }

  if (envelope != nullptr) {
    double margin = kInf;
    for (const auto& snap : sol.snapshots) {
      for (int i = 0; i < sol.grid.size(); ++i) {
        const double env = (*envelope)(sol.grid[i], snap.t);
        // Skip vacuous far-field ties where both sides underflow to zero.
        if (env == 0.0 && snap.u[i] == 0.0) continue;
        margin = std::min(margin, env - snap.u[i]);
      }
    }
    if (!std::isfinite(margin)) {
      o.kind = Outcome::Kind::inconclusive;
      o.reason = "envelope comparison had no information";
      return o;
    }
    // Discrete comparison tolerance: truncation error may push far-field
    // tails a hair above the continuum envelope.
    if (margin >= -1e-6) {
      o.kind = Outcome::Kind::global_up_to;
      o.horizon = sol.t;
      o.envelope_margin = margin;
      o.reason = margin > 0
                     ? "solution stayed below the comparison envelope"
                     : "solution stayed below the comparison envelope within "
                       "the discrete tolerance";
    } else {
      o.kind = Outcome::Kind::inconclusive;
      o.envelope_margin = margin;
      o.reason = "solution exceeded the comparison envelope";
    }
    return o;
  }

  // No envelope: flag a supremum that doubled over the last time decade.
  double sup_early = kNaN;
  const double t_probe = sol.t / 10.0;
  for (const auto& row : sol.history) {
    if (row.t >= t_probe) {
      sup_early = row.sup_u;
      break;
    }
  }
  const double sup_final = sol.history.back().sup_u;
  if (std::isfinite(sup_early) && sup_final > 2.0 * sup_early) {
    o.kind = Outcome::Kind::inconclusive;
    o.reason = "still growing at the horizon";
  } else {
    o.kind = Outcome::Kind::global_up_to;
    o.horizon = sol.t;
    o.reason = "reached the horizon without growth";
  }
  return o;
}

}  // namespace heatlab
