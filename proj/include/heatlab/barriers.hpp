#pragma once

#include <optional>
#include <variant>

#include "heatlab/certificates.hpp"
#include "heatlab/drift.hpp"
#include "heatlab/geometry.hpp"

namespace heatlab {

// Defect grid: log-spaced points on [r_lo, r_max] plus an origin-limit proxy
// at r = 1e-8, where the series form of F is exact to O(r^2).
struct DefectGrid {
  double r_lo = 1e-4;
  double r_max = 40.0;
  int points = 4096;
};

struct GaussianDefectGrid {
  double r_max = 50.0;
  double t_max = 10.0;
  int nr = 64;
  int nt = 64;
};

// Glued two-piece weight: C2 exp(-a2 r^2) inside the gluing radius R0,
// C1 exp(-a1 r) outside, with a2 = a1 / (2 R0) and C2 chosen so the pieces
// match in value; this makes the gluing C^1 for every R0.
struct PhiParams {
  double a1 = 0, a2 = 0, C1 = 0, C2 = 0, R0 = 0;
  double lambda = 0, div_bound = 0, h2 = 0;
};

struct EtaParams {
  double a = 0, lambda = 0, div_bound = 0;
  double sigma_drift = 0, measured_c1 = 0;
};

// w(r) = exp(-a r); a sits strictly between the roots of a^2 - sigma a +
// lambda with sigma = (n-1) h1 + b1 (the spectral sigma).
struct WParams {
  double a = 0, lambda = 0;
  double sigma_spectral = 0, h1 = 0, b1 = 0;
};

// u(r, t) = C (t + t0)^{-alpha} exp(-r^2 / (4 (t + t0))).
struct GaussianParams {
  double alpha = 0, C = 0, t0 = 0;
  double epsilon = 0, nu = 0, p = 0;
};

class Barrier {
 public:
  enum class Family { phi, eta, w, gaussian_super };

  Family family() const { return family_; }
  bool time_dependent() const { return family_ == Family::gaussian_super; }

  double value(double r, double t = 0.0) const;
  double d1(double r, double t = 0.0) const;
  double d2(double r, double t = 0.0) const;
  double dt(double r, double t = 0.0) const;  // 0 for stationary families

  // Mass normalization (c for phi, k for eta); absent for w, gaussian_super
  // and for non-normalizable phi.
  std::optional<double> normalization() const { return normalization_; }
  const AdmissibilityCertificate& certificate() const { return cert_; }

  const PhiParams& phi_params() const;
  const EtaParams& eta_params() const;
  const WParams& w_params() const;
  const GaussianParams& gaussian_params() const;

 private:
  friend Barrier build_phi(const ModelManifold&, const RadialDriftField&,
                           double, double, double, double, double,
                           const DefectGrid&);
  friend Barrier build_eta(const ModelManifold&, const RadialDriftField&,
                           double, double, double, double, const DefectGrid&);
  friend Barrier build_w(const ModelManifold&, const RadialDriftField&, double,
                         std::optional<double>, const DefectGrid&);
  friend Barrier build_gaussian_super(const ModelManifold&,
                                      const RadialDriftField&, double, double,
                                      double, const GaussianDefectGrid&);

  Barrier() = default;
  Family family_ = Family::phi;
  std::variant<PhiParams, EtaParams, WParams, GaussianParams> params_;
  std::optional<double> normalization_;
  AdmissibilityCertificate cert_;
};

// Admissible decay-rate interval for the glued weight. The closed form is
// the analytic bound used as initial guess; the verified supremum comes from
// bisection on the grid-checked defect with the exact mean curvature.
struct AdmissibleA1Interval {
  double branch_outer = kNaN;    // (lambda-C)/((n-1) h2 coth(h2 R0) + b0)
  double branch_inner = kNaN;    // (lambda-C)/(1/R0 + (n-1) h2 coth(h2 R0) - min(b0,0))
  double closed_form_hi = kNaN;  // min of the branches
  double verified_hi = kNaN;     // grid-verified supremum
  double integrable_lo = 0;      // (n-1) h2, exclusive
  bool integrable_feasible = false;
};

AdmissibleA1Interval admissible_a1(double lambda, double div_bound, double h2,
                                   double R0, double b0, int n,
                                   bool require_integrable,
                                   const ModelManifold& m,
                                   const RadialDriftField& drift,
                                   const DefectGrid& grid = {});

Barrier build_phi(const ModelManifold& m, const RadialDriftField& drift,
                  double lambda, double div_bound, double h2, double R0,
                  double C1, const DefectGrid& grid = {});

Barrier build_eta(const ModelManifold& m, const RadialDriftField& drift,
                  double a, double lambda, double div_bound,
                  double sigma_drift, const DefectGrid& grid = {});

Barrier build_w(const ModelManifold& m, const RadialDriftField& drift,
                double lambda, std::optional<double> a = {},
                const DefectGrid& grid = {});

Barrier build_gaussian_super(const ModelManifold& m,
                             const RadialDriftField& drift, double p,
                             double epsilon, double t0,
                             const GaussianDefectGrid& grid = {});

// Pointwise defect with the convention ">= 0 means the inequality holds".
// phi, eta: D v - b v' + (lambda - div b) v   (stationary weight form)
// w:        -(D w + b w' + lambda w)          (supersolution form)
// Throws UsageError when the family does not match the defect form.
double stationary_defect(const Barrier& b, const ModelManifold& m,
                         const RadialDriftField& drift, double lambda,
                         double r);

// d_t u - D u - b u_r - u^p for the time-dependent supersolution.
double parabolic_defect(const Barrier& b, const ModelManifold& m,
                        const RadialDriftField& drift, double p, double r,
                        double t);

}  // namespace heatlab
