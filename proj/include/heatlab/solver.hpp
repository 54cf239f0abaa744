#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "heatlab/barriers.hpp"
#include "heatlab/criteria.hpp"

namespace heatlab {

enum class Scheme { imex_be, imex_cn };

struct SolverConfig {
  double r_max = 40.0;
  int n_grid = 1024;
  double t_end = 10.0;
  double u_cap = 1e8;
  double dt_min = 1e-12;
  double safety = 0.5;
  // Node placement r_i = r_max (i/(N-1))^grading; 1 = uniform, larger
  // values cluster nodes near the origin.
  double grading = 1.0;
  Scheme scheme = Scheme::imex_be;
  std::vector<double> snapshot_times;

  void validate() const;
};

struct HistoryRow {
  double t, sup_u, mass, dt;
};

struct Snapshot {
  double t;
  Eigen::ArrayXd u;
};

enum class HaltReason { reached_t_end, hit_u_cap, dt_underflow };

struct RadialSolution {
  Eigen::ArrayXd grid;     // r_0 = 0 < ... < r_{N-1} = r_max
  Eigen::ArrayXd values;   // nodal u >= 0, u(r_max) = 0
  double t = 0;
  HaltReason halt = HaltReason::reached_t_end;
  std::vector<HistoryRow> history;  // one row per step
  std::vector<Snapshot> snapshots;
  long clip_count = 0;           // negatives below the -1e-14 tolerance
  double min_before_clip = 0;    // most negative nodal value ever seen
  double boundary_flux = 0;      // u_{N-2} / dr at halt (truncation diagnostic)
};

struct Outcome {
  enum class Kind { blowup, global_up_to, inconclusive };
  Kind kind = Kind::inconclusive;
  double t_est = kNaN;           // halt time for blow-up
  double horizon = kNaN;         // t_end for global_up_to
  double envelope_margin = kNaN; // min over snapshots of (envelope - u)
  std::string reason;
};

struct SimulateResult {
  RadialSolution solution;
  Outcome outcome;
};

using RadialTimeFn = std::function<double(double r, double t)>;

// Discrete radial operator u'' + (F + b) u' with the regularized origin
// stencil 2 d_eff (u_1 - u_0)/dr^2, d_eff = n + lim r b(r), and Dirichlet 0
// at r_max. Throws ConfigError when d_eff < 1.
Eigen::ArrayXd apply_spatial_operator(const RadialSolution& sol,
                                      const ModelManifold& m,
                                      const RadialDriftField& drift);

// IMEX integration of u_t = D u + b u_r + u^p: linear part implicit
// (tridiagonal solve per step), reaction explicit. mass_barrier, when given
// and normalized, feeds the mass column of the step history.
SimulateResult simulate(const RadialFn& u0, const ModelManifold& m,
                        const RadialDriftField& drift, double p,
                        const SolverConfig& cfg,
                        const Barrier* mass_barrier = nullptr);

// Forced linear variant for convergence studies: the reaction is replaced by
// the known source s(r, t).
SimulateResult simulate_linear_forced(const RadialFn& u0,
                                      const ModelManifold& m,
                                      const RadialDriftField& drift,
                                      const RadialTimeFn& source,
                                      const SolverConfig& cfg);

// Weighted mass normalization * \int u(., t) barrier dmu at each snapshot.
std::vector<std::pair<double, double>> mass_series(const RadialSolution& sol,
                                                   const Barrier& barrier,
                                                   const ModelManifold& m);

// Classification per the run's halt reason; an envelope turns a completed
// run into global_up_to with its comparison margin.
Outcome classify_outcome(const RadialSolution& sol,
                         const RadialTimeFn* envelope = nullptr);

}  // namespace heatlab
