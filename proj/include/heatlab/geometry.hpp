#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>

namespace heatlab {

enum class ManifoldKind { euclidean, hyperbolic, ricci_decay };

// Rotationally symmetric Cartan-Hadamard model manifold: metric
// dr^2 + psi(r)^2 dtheta^2 with psi(0) = 0, psi'(0) = 1, psi'' >= 0.
//
// euclidean:    psi(r) = r
// hyperbolic:   psi(r) = sinh(h r) / h
// ricci_decay:  psi solves psi'' = (beta_bar / (1 + r^2)) psi, the equality
//               case of the decaying Ricci lower bound, tabulated on a
//               log-spaced grid with Hermite interpolation.
//
// Immutable after construction; all evaluations are pure and reentrant.
class ModelManifold {
 public:
  static ModelManifold euclidean(int n);
  static ModelManifold hyperbolic(int n, double h);
  static ModelManifold ricci_decay(int n, double beta_bar);

  ManifoldKind kind() const { return kind_; }
  int dim() const { return n_; }
  // h for hyperbolic, beta_bar for ricci_decay, 0 for euclidean.
  double curvature_parameter() const { return param_; }

  double psi(double r) const;
  double psi_d1(double r) const;
  double psi_d2(double r) const;

  // log psi(r), overflow-safe for large hyperbolic radii (r > 0).
  double log_psi(double r) const;

  // Mean-curvature coefficient F(r) = (n-1) psi'(r)/psi(r) of the radial
  // Laplacian. Throws std::domain_error for r <= 0; use
  // r_times_mean_curvature for origin limits.
  double mean_curvature(double r) const;

  // r * F(r), extended continuously to r = 0 by n - 1.
  double r_times_mean_curvature(double r) const;

  double sectional_radial(double r) const;  // K_omega = -psi''/psi
  double ricci_radial(double r) const;      // -(n-1) psi''/psi
  double sphere_area(double R) const;       // mu'(S_R)

  // -K as r -> 0 (0, h^2, beta_bar); coefficient of the F series near 0.
  double q0() const;

 private:
  ModelManifold() = default;

  struct ProfileTable {
    Eigen::ArrayXd r;     // log-spaced samples
    Eigen::ArrayXd psi;
    Eigen::ArrayXd dpsi;
    double beta_bar = 0;
    double tail_exponent = 0;  // log-slope at the last samples, for r beyond
    // Hermite interpolation of psi and psi' on the table; series below the
    // first sample, power-law extension past the last.
    double eval_psi(double r) const;
    double eval_dpsi(double r) const;
  };

  ManifoldKind kind_ = ManifoldKind::euclidean;
  int n_ = 2;
  double param_ = 0;
  std::shared_ptr<const ProfileTable> table_;
};

struct AssumptionTarget {
  enum class Type { A0, A1 };
  Type type = Type::A0;
  double h1 = 0, h2 = 0;  // A0: K <= -h1^2, Ric >= -(n-1) h2^2
  double beta_bar = 0;    // A1: Ric >= -(n-1) beta_bar / (1 + r^2)

  static AssumptionTarget A0(double h1, double h2);
  static AssumptionTarget A1(double beta_bar);
  std::string label() const;
};

// Finite-grid discharge of a curvature assumption. max_violation is the
// worst relative residual minus the 1e-9 acceptance slack, so PASS
// certificates always carry max_violation <= 0.
struct AssumptionCertificate {
  std::string assumption;
  double r_min = 0, r_max = 0;
  int grid_points = 0;
  double max_violation = 0;
  bool pass = false;
  // max over the grid of r F(r) / (n-1); the measured upper mean-curvature
  // constant on polynomially growing models.
  double measured_c1 = 0;
};

AssumptionCertificate check_curvature_assumptions(const ModelManifold& m,
                                                  const AssumptionTarget& t,
                                                  double r_min, double r_max,
                                                  int grid_points);

// Larger root of g (g - 1) = beta_bar. Throws std::domain_error for
// beta_bar < 0.
double gamma_exponent(double beta_bar);

// Least-squares slope of log mu'(S_R) against log R over [R_lo, R_hi].
double fitted_area_growth_exponent(const ModelManifold& m, double R_lo,
                                   double R_hi, int samples);

// exp-spaced samples between lo and hi inclusive (lo, hi > 0).
Eigen::ArrayXd log_spaced(double lo, double hi, int n);

}  // namespace heatlab
