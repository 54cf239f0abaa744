#pragma once

#include <functional>
#include <optional>
#include <string>

#include "heatlab/barriers.hpp"
#include "heatlab/quadrature.hpp"

namespace heatlab {

using RadialFn = std::function<double(double)>;

struct KaplanVerdict {
  double mass = 0;
  double threshold = 0;  // lambda^{1/(p-1)}
  bool predicts_blowup = false;
  // Upper bound for the blow-up time of the weighted mass when blow-up is
  // predicted.
  std::optional<double> ode_blowup_time_upper;
};

struct ExponentRanges {
  double fujita_nonexistence_upper = 0;  // 1 + 2/(gamma (n-1) + 1)
  double existence_lower = 0;            // 1 + 2/(n + nu)
  int n = 0;
  double gamma = 1;
  double nu = 0;
  bool euclidean_consistency = false;  // both bounds coincide at 1 + 2/n
};

// Decaying-in-time supersolution e^{-lambda t} xi(t) c_tilde w(r) built on a
// certified w; xi starts at 1, is nondecreasing and stays bounded as long as
// c_tilde^{p-1} < lambda.
struct Envelope {
  double lambda = 0, p = 0, c_tilde = 0;
  double w_sup = 1.0;  // sup of c_tilde * w, equals c_tilde since w(0) = 1
  Barrier w;

  double xi(double t) const;
  double xi_infinity() const;
  double value(double r, double t) const;
};

double kaplan_threshold(double lambda, double p);

// Weighted-mass test: mass = normalization * \int u0 barrier dmu against the
// threshold; strict inequality predicts blow-up. Throws UsageError when the
// barrier carries no normalization.
KaplanVerdict mass_test(const RadialFn& u0, const Barrier& barrier,
                        const ModelManifold& m, double lambda, double p,
                        double r_max, const QuadratureRule& rule = {});

// Blow-up time of y' = y^p - lambda y, y(0) = mass0: closed form, +inf below
// the threshold.
double ode_blowup_time(double mass0, double lambda, double p);

// Independent oracle: adaptive 4th-order integration to y = 1e12 with an
// analytic tail correction.
double ode_blowup_time_numeric(double mass0, double lambda, double p,
                               double rel_tol = 1e-10);

ExponentRanges exponent_ranges(int n, double gamma, double nu);

struct SmallAResult {
  bool certified = false;
  double a = 0;
  double lambda = 0;
  KaplanVerdict verdict;
  int halvings = 0;
  std::string reason;  // set when not certified; never claims global existence
};

// Geometric search a <- a/2 from a = 1 with the coupling
// lambda(a) = 2 a [1 + C1 (n-1) + sigma] until the eta-mass test certifies
// blow-up, or a < 1e-12 (inconclusive).
SmallAResult find_small_a(const RadialFn& u0, const ModelManifold& m,
                          const RadialDriftField& drift, double sigma_drift,
                          double div_bound, double measured_c1, double p,
                          double gamma);

// Validates 0 < c_tilde < lambda^{1/(p-1)} / w(0).
Envelope make_envelope(double lambda, double p, double c_tilde,
                       const Barrier& w);

// dt u - D u - b u_r - u^p for the envelope; >= 0 where it supersolves.
double envelope_parabolic_defect(const Envelope& e, const ModelManifold& m,
                                 const RadialDriftField& drift, double r,
                                 double t);

}  // namespace heatlab
