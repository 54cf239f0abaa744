#include "heatlab/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "heatlab/quadrature.hpp"

namespace heatlab {

namespace {

// Origin limits of defects are discharged at this radius; the series form
// of F makes the relative evaluation error O(r^2) there.
constexpr double kOriginProxy = 1e-8;
constexpr double kDefectTol = 1e-12;

double coth(double x) { return 1.0 / std::tanh(x); }

struct PhiShape {
  double a1, a2, C1, C2, R0;
  double value(double r) const {
    return r < R0 ? C2 * std::exp(-a2 * r * r) : C1 * std::exp(-a1 * r);
  }
  double d1(double r) const {
    return r < R0 ? -2.0 * a2 * r * value(r) : -a1 * value(r);
  }
  double d2(double r) const {
    return r < R0 ? (4.0 * a2 * a2 * r * r - 2.0 * a2) * value(r)
                  : a1 * a1 * value(r);
  }
};

PhiShape make_phi_shape(double a1, double C1, double R0) {
  PhiShape s;
  s.a1 = a1;
  s.a2 = a1 / (2.0 * R0);
  s.C1 = C1;
  s.C2 = C1 * std::exp(-a1 * R0 + s.a2 * R0 * R0);
  s.R0 = R0;
  return s;
}

// Weight-form defect D v - b v' + (lambda - div b) v for an explicit shape.
template <typename Shape>
double weight_defect(const Shape& s, const ModelManifold& m,
                     const RadialDriftField& drift, double lambda, double r) {
  const double F = m.mean_curvature(r);
  const double b = drift.value(r);
  const double db = drift.divergence(r, m);
  return s.d2(r) + (F - b) * s.d1(r) + (lambda - db) * s.value(r);
}

Eigen::ArrayXd defect_radii(const DefectGrid& g) {
  Eigen::ArrayXd pts(g.points + 1);
  pts[0] = kOriginProxy;
  pts.tail(g.points) = log_spaced(g.r_lo, g.r_max, g.points);
  return pts;
}

// min over the grid of defect / value. Points where the weight underflows
// to zero carry a vacuous inequality (every term scales with the weight)
// and are skipped.
template <typename DefectFn, typename ValueFn>
double min_relative_defect(const Eigen::ArrayXd& radii, const DefectFn& defect,
                           const ValueFn& value) {
  double worst = kInf;
  for (int i = 0; i < radii.size(); ++i) {
    const double v = value(radii[i]);
    if (v == 0.0) continue;
    if (!(v > 0)) return -kInf;
    worst = std::min(worst, defect(radii[i]) / v);
  }
  return worst;
}

ConstraintCheck make_row(const std::string& name, const std::string& eq,
                         double closed, double verified, double violation) {
  ConstraintCheck c;
  c.constraint = name;
  c.paper_eq = eq;
  c.closed_form_bound = closed;
  c.verified_bound = verified;
  c.max_violation = violation;
  c.pass = violation <= 0;
  return c;
}

// Radius past the weighted integrand's peak where it has dropped by a factor
// e^-110; the normalization integral is truncated there. Returns NaN when
// the drop is not reached inside the overflow-safe scan range.
double normalization_r_max(const std::function<double(double)>& value,
                           const ModelManifold& m) {
  const int nm1 = m.dim() - 1;
  const Eigen::ArrayXd rs = log_spaced(1e-4, 1e8, 900);
  double best = -kInf;
  int ipeak = 0;
  Eigen::ArrayXd L(rs.size());
  for (int i = 0; i < rs.size(); ++i) {
    const double v = value(rs[i]);
    L[i] = v > 0 ? std::log(v) + nm1 * m.log_psi(rs[i]) : -kInf;
    if (L[i] > best) {
      best = L[i];
      ipeak = i;
    }
  }
  for (int i = ipeak; i < rs.size(); ++i) {
    if (L[i] < best - 110.0) return rs[i];
  }
  return kNaN;
}

}  // namespace

double Barrier::value(double r, double t) const {
  switch (family_) {
    case Family::phi: {
      const auto& p = std::get<PhiParams>(params_);
      return r < p.R0 ? p.C2 * std::exp(-p.a2 * r * r)
                      : p.C1 * std::exp(-p.a1 * r);
    }
    case Family::eta:
      return std::exp(-std::get<EtaParams>(params_).a * r * r);
    case Family::w:
      return std::exp(-std::get<WParams>(params_).a * r);
    case Family::gaussian_super: {
      const auto& g = std::get<GaussianParams>(params_);
      const double T = t + g.t0;
      return g.C * std::pow(T, -g.alpha) * std::exp(-r * r / (4.0 * T));
    }
  }
  return 0;
}

double Barrier::d1(double r, double t) const {
  switch (family_) {
    case Family::phi: {
      const auto& p = std::get<PhiParams>(params_);
      return r < p.R0 ? -2.0 * p.a2 * r * value(r) : -p.a1 * value(r);
    }
    case Family::eta:
      return -2.0 * std::get<EtaParams>(params_).a * r * value(r);
    case Family::w:
      return -std::get<WParams>(params_).a * value(r);
    case Family::gaussian_super: {
      const double T = t + std::get<GaussianParams>(params_).t0;
      return -r / (2.0 * T) * value(r, t);
    }
  }
  return 0;
}

double Barrier::d2(double r, double t) const {
  switch (family_) {
    case Family::phi: {
      const auto& p = std::get<PhiParams>(params_);
      return r < p.R0
                 ? (4.0 * p.a2 * p.a2 * r * r - 2.0 * p.a2) * value(r)
                 : p.a1 * p.a1 * value(r);
    }
    case Family::eta: {
      const double a = std::get<EtaParams>(params_).a;
      return (4.0 * a * a * r * r - 2.0 * a) * value(r);
    }
    case Family::w: {
      const double a = std::get<WParams>(params_).a;
      return a * a * value(r);
    }
    case Family::gaussian_super: {
      const double T = t + std::get<GaussianParams>(params_).t0;
      return (r * r / (4.0 * T * T) - 1.0 / (2.0 * T)) * value(r, t);
    }
  }
  return 0;
}

double Barrier::dt(double r, double t) const {
  if (family_ != Family::gaussian_super) return 0.0;
  const auto& g = std::get<GaussianParams>(params_);
  const double T = t + g.t0;
  return (-g.alpha / T + r * r / (4.0 * T * T)) * value(r, t);
}

const PhiParams& Barrier::phi_params() const {
  if (family_ != Family::phi) throw UsageError("barrier is not a phi weight");
  return std::get<PhiParams>(params_);
}
const EtaParams& Barrier::eta_params() const {
  if (family_ != Family::eta) throw UsageError("barrier is not an eta weight");
  return std::get<EtaParams>(params_);
}
const WParams& Barrier::w_params() const {
  if (family_ != Family::w) throw UsageError("barrier is not a w weight");
  return std::get<WParams>(params_);
}
const GaussianParams& Barrier::gaussian_params() const {
  if (family_ != Family::gaussian_super)
    throw UsageError("barrier is not a gaussian supersolution");
  return std::get<GaussianParams>(params_);
}

AdmissibleA1Interval admissible_a1(double lambda, double div_bound, double h2,
                                   double R0, double b0, int n,
                                   bool require_integrable,
                                   const ModelManifold& m,
                                   const RadialDriftField& drift,
                                   const DefectGrid& grid) {
  if (!(lambda > div_bound))
    throw ParameterError("admissible_a1: lambda > div bound required");
  if (!(R0 > 0)) throw ParameterError("admissible_a1: R0 > 0 required");
  if (!(h2 >= 0)) throw ParameterError("admissible_a1: h2 >= 0 required");

  const double nm1 = n - 1.0;
  const double cothR0 = h2 > 0 ? nm1 * h2 * coth(h2 * R0) : nm1 / R0;
  const double margin = lambda - div_bound;

  AdmissibleA1Interval iv;
  const double denom_outer = cothR0 + b0;
  if (!(denom_outer > 0)) {
    std::ostringstream msg;
    msg << "admissible_a1: outer-branch denominator (n-1) h2 coth(h2 R0) + b0 = "
        << denom_outer << " is not positive";
    throw ParameterError(msg.str());
  }
  iv.branch_outer = margin / denom_outer;
  iv.branch_inner = margin / (1.0 / R0 + cothR0 - std::min(b0, 0.0));
  iv.closed_form_hi = std::min(iv.branch_outer, iv.branch_inner);
  iv.integrable_lo = nm1 * h2;

  const Eigen::ArrayXd radii = defect_radii(grid);
  auto feasible = [&](double a1) {
    const PhiShape s = make_phi_shape(a1, 1.0, R0);
    for (int i = 0; i < radii.size(); ++i) {
      const double r = radii[i];
      if (weight_defect(s, m, drift, lambda, r) < -kDefectTol * s.value(r))
        return false;
    }
    return true;
  };

  // The closed form is an initial guess only: expand while the grid defect
  // still certifies, then bisect onto the supremum.
  double lo = 0, hi = iv.closed_form_hi;
  if (feasible(iv.closed_form_hi)) {
    lo = iv.closed_form_hi;
    int doublings = 0;
    while (doublings < 8 && feasible(lo * 2.0)) {
      lo *= 2.0;
      ++doublings;
    }
    hi = lo * 2.0;
    if (doublings == 8) {
      iv.verified_hi = lo;  // cap the expansion far beyond the closed form
    }
  }
  if (!std::isfinite(iv.verified_hi)) {
    for (int it = 0; it < 200 && (hi - lo) > 1e-13 * std::max(1.0, hi); ++it) {
      const double mid = 0.5 * (lo + hi);
      (feasible(mid) ? lo : hi) = mid;
    }
    iv.verified_hi = lo;
  }
  if (!(iv.verified_hi > 0))
    throw ParameterError("admissible_a1: empty verified interval");
  iv.integrable_feasible = iv.verified_hi > iv.integrable_lo * (1.0 + 1e-9);
  if (require_integrable && !iv.integrable_feasible)
    throw ParameterError(
        "admissible_a1: no decay rate is both certified and above the "
        "integrability threshold (n-1) h2");
  return iv;
}

Barrier build_phi(const ModelManifold& m, const RadialDriftField& drift,
                  double lambda, double div_bound, double h2, double R0,
                  double C1, const DefectGrid& grid) {
  if (!(lambda > div_bound))
    throw ParameterError("build_phi: lambda > div bound required");
  if (!(R0 > 0) || !(C1 > 0))
    throw ParameterError("build_phi: R0 > 0 and C1 > 0 required");
  if (!drift.bounds.b0)
    throw ParameterError("build_phi: drift must declare the lower bound b0");
  const double b0 = *drift.bounds.b0;

  AdmissibleA1Interval iv = admissible_a1(lambda, div_bound, h2, R0, b0,
                                          m.dim(), false, m, drift, grid);

  Barrier bar;
  bar.family_ = Barrier::Family::phi;
  PhiParams p;
  p.lambda = lambda;
  p.div_bound = div_bound;
  p.h2 = h2;
  p.R0 = R0;
  p.C1 = C1;
  if (iv.integrable_feasible) {
    p.a1 = 0.5 * (iv.integrable_lo + iv.verified_hi);
    bar.cert_.normalizable = true;
  } else {
    p.a1 = iv.verified_hi;
    bar.cert_.normalizable = false;
  }
  const PhiShape shape = make_phi_shape(p.a1, C1, R0);
  p.a2 = shape.a2;
  p.C2 = shape.C2;
  bar.params_ = p;

  const Eigen::ArrayXd radii = defect_radii(grid);
  bar.cert_.min_relative_defect = min_relative_defect(
      radii,
      [&](double r) { return weight_defect(shape, m, drift, lambda, r); },
      [&](double r) { return shape.value(r); });

  auto& checks = bar.cert_.checks;
  checks.push_back(make_row(
      "a1_interval",
      "0 < a1 <= min{(lambda-C)/((n-1) h2 coth(h2 R0) + b0), "
      "(lambda-C)/(1/R0 + (n-1) h2 coth(h2 R0) - min(b0,0))}; grid-verified",
      iv.closed_form_hi, iv.verified_hi,
      (p.a1 - iv.verified_hi) / std::max(1.0, iv.verified_hi)));
  checks.push_back(make_row(
      "defect_nonnegative",
      "D(phi) - b phi' + (lambda - div b) phi >= 0 off the gluing sphere",
      kNaN, bar.cert_.min_relative_defect,
      -bar.cert_.min_relative_defect - kDefectTol));
  for (auto& row :
       drift.verify_declared_bounds(m, grid.r_lo, grid.r_max, 1024))
    checks.push_back(row);

  if (bar.cert_.normalizable) {
    checks.push_back(make_row("a1_integrability", "a1 > (n-1) h2",
                              iv.integrable_lo, p.a1,
                              (iv.integrable_lo - p.a1) /
                                  std::max(1.0, iv.integrable_lo)));
    const double rn = normalization_r_max(
        [&](double r) { return shape.value(r); }, m);
    if (std::isfinite(rn)) {
      // Split at the gluing sphere so no quadrature panel crosses the kink.
      auto v = [&](double r) { return shape.value(r); };
      const double mass = integrate_radial(v, m, 0.0, R0, QuadratureRule{}) +
                          integrate_radial(v, m, R0, rn, QuadratureRule{});
      bar.normalization_ = 1.0 / mass;
    } else {
      bar.cert_.normalizable = false;
    }
  }
  return bar;
}

Barrier build_eta(const ModelManifold& m, const RadialDriftField& drift,
                  double a, double lambda, double div_bound,
                  double sigma_drift, const DefectGrid& grid) {
  if (!(a > 0)) throw ParameterError("build_eta: a > 0 required");
  if (sigma_drift < 0)
    throw ParameterError("build_eta: sigma >= 0 required");

  // Certify the decaying Ricci assumption; euclidean realizes it with 0.
  double beta_eff = 0;
  if (m.kind() == ManifoldKind::ricci_decay) beta_eff = m.curvature_parameter();
  const auto a1cert = check_curvature_assumptions(
      m, AssumptionTarget::A1(beta_eff), 1e-4, 1e4, 2048);
  if (!a1cert.pass)
    throw ParameterError(
        "build_eta: manifold is not certified under the decaying Ricci "
        "assumption (" + a1cert.assumption + ")");
  const double c1 = a1cert.measured_c1;

  const double nm1 = m.dim() - 1.0;
  const double lambda_min = 2.0 * a * (1.0 + c1 * nm1 + sigma_drift) + div_bound;
  if (lambda < lambda_min * (1.0 - 1e-12)) {
    std::ostringstream msg;
    msg << "build_eta: lambda = " << lambda
        << " is below the admissible minimum "
        << lambda_min << " = 2 a [1 + C1 (n-1) + sigma] + C";
    throw ParameterError(msg.str());
  }

  Barrier bar;
  bar.family_ = Barrier::Family::eta;
  EtaParams p;
  p.a = a;
  p.lambda = lambda;
  p.div_bound = div_bound;
  p.sigma_drift = sigma_drift;
  p.measured_c1 = c1;
  bar.params_ = p;

  const Eigen::ArrayXd radii = defect_radii(grid);
  auto value = [&](double r) { return std::exp(-a * r * r); };
  auto defect = [&](double r) {
    const double v = value(r);
    const double dv1 = -2.0 * a * r * v;
    const double dv2 = (4.0 * a * a * r * r - 2.0 * a) * v;
    return dv2 + (m.mean_curvature(r) - drift.value(r)) * dv1 +
           (lambda - drift.divergence(r, m)) * v;
  };
  bar.cert_.min_relative_defect = min_relative_defect(radii, defect, value);

  auto& checks = bar.cert_.checks;
  checks.push_back(make_row("lambda_admissible",
                            "lambda >= 2 a [1 + C1 (n-1) + sigma] + C",
                            lambda_min, lambda,
                            (lambda_min - lambda) / std::max(1.0, lambda_min) -
                                1e-12));
  checks.push_back(make_row(
      "defect_nonnegative",
      "D(eta) - b eta' + (lambda - div b) eta >= 0", kNaN,
      bar.cert_.min_relative_defect,
      -bar.cert_.min_relative_defect - kDefectTol));
  if (sigma_drift > 0 || drift.kind() != DriftKind::none) {
    ConstraintCheck row;
    const Eigen::ArrayXd g = log_spaced(grid.r_lo, grid.r_max, 1024);
    double worst = -kInf;
    for (int i = 0; i < g.size(); ++i) {
      const double lhs = -sigma_drift / g[i], rhs = drift.value(g[i]);
      worst = std::max(worst, (lhs - rhs) /
                                  std::max({1.0, std::abs(lhs), std::abs(rhs)}));
    }
    checks.push_back(make_row("drift_inverse_lower_bound",
                              "b(r) >= -sigma / r", sigma_drift, kNaN,
                              worst - 1e-9));
  }

  const double rn = normalization_r_max(value, m);
  if (!std::isfinite(rn))
    throw NumericError("build_eta: normalization integral did not localize");
  bar.normalization_ = 1.0 / integrate_radial(value, m, rn);
  return bar;
}

Barrier build_w(const ModelManifold& m, const RadialDriftField& drift,
                double lambda, std::optional<double> a_opt,
                const DefectGrid& grid) {
  if (!drift.bounds.b1)
    throw ParameterError("build_w: drift must declare the lower bound b1");
  const double b1 = *drift.bounds.b1;
  const double h1 =
      m.kind() == ManifoldKind::hyperbolic ? m.curvature_parameter() : 0.0;
  const double nm1 = m.dim() - 1.0;
  if (!(b1 > -nm1 * h1))
    throw ParameterError("build_w: b1 > -(n-1) h1 required");
  const double sigma = nm1 * h1 + b1;
  if (!(lambda > 0 && lambda < 0.25 * sigma * sigma)) {
    std::ostringstream msg;
    msg << "build_w: lambda must lie in (0, sigma^2/4) = (0, "
        << 0.25 * sigma * sigma << ")";
    throw ParameterError(msg.str());
  }
  const double disc = std::sqrt(sigma * sigma - 4.0 * lambda);
  const double root_lo = 0.5 * (sigma - disc);
  const double root_hi = 0.5 * (sigma + disc);
  // a outside the open root interval is not rejected; the certificate
  // records the failing constraint and the grid defect exposes it.
  const double a = a_opt.value_or(0.5 * sigma);
  if (!(a > 0)) throw ParameterError("build_w: a > 0 required");

  Barrier bar;
  bar.family_ = Barrier::Family::w;
  WParams p;
  p.a = a;
  p.lambda = lambda;
  p.sigma_spectral = sigma;
  p.h1 = h1;
  p.b1 = b1;
  bar.params_ = p;

  if (h1 > 0) {
    const auto cert = check_curvature_assumptions(
        m, AssumptionTarget::A0(h1, h1), grid.r_lo, grid.r_max, 1024);
    if (!cert.pass)
      throw ParameterError("build_w: manifold fails the sectional bound K <= -h1^2");
  }

  const Eigen::ArrayXd radii = defect_radii(grid);
  auto value = [&](double r) { return std::exp(-a * r); };
  auto defect = [&](double r) {
    const double v = value(r);
    // -(w'' + (F + b) w' + lambda w); positive where w is a supersolution.
    return -(a * a * v - (m.mean_curvature(r) + drift.value(r)) * a * v +
             lambda * v);
  };
  bar.cert_.min_relative_defect = min_relative_defect(radii, defect, value);

  auto& checks = bar.cert_.checks;
  checks.push_back(make_row(
      "a_strictly_between_roots",
      "a in ((sigma - sqrt(sigma^2 - 4 lambda))/2, (sigma + sqrt(...))/2); "
      "upper bound alone leaves a^2 - sigma a + lambda > 0 for small a",
      root_hi, root_lo,
      std::max(root_lo - a, a - root_hi) / std::max(1.0, root_hi)));
  checks.push_back(make_row("defect_nonnegative",
                            "D(w) + b w' + lambda w <= 0", kNaN,
                            bar.cert_.min_relative_defect,
                            -bar.cert_.min_relative_defect - kDefectTol));
  for (auto& row : drift.verify_declared_bounds(m, grid.r_lo, grid.r_max, 1024))
    checks.push_back(row);
  return bar;
}

Barrier build_gaussian_super(const ModelManifold& m,
                             const RadialDriftField& drift, double p,
                             double epsilon, double t0,
                             const GaussianDefectGrid& grid) {
  if (!drift.bounds.nu)
    throw ParameterError(
        "build_gaussian_super: drift must declare the inverse-radius bound nu");
  const double nu = *drift.bounds.nu;
  const int n = m.dim();
  if (!(nu > -n && nu <= 0))
    throw ParameterError("build_gaussian_super: -n < nu <= 0 required");
  const double p_low = 1.0 + 2.0 / (n + nu);
  if (!(p > p_low)) {
    std::ostringstream msg;
    msg << "build_gaussian_super: p = " << p
        << " must exceed 1 + 2/(n + nu) = " << p_low;
    throw ParameterError(msg.str());
  }
  const double eps_hi = 0.5 * (n + nu) - 1.0 / (p - 1.0);
  if (!(epsilon > 0 && epsilon < eps_hi)) {
    std::ostringstream msg;
    msg << "build_gaussian_super: epsilon must lie in (0, "
        << eps_hi << ") = (0, (n+nu)/2 - 1/(p-1))";
    throw ParameterError(msg.str());
  }

  Barrier bar;
  bar.family_ = Barrier::Family::gaussian_super;
  GaussianParams g;
  g.epsilon = epsilon;
  g.nu = nu;
  g.p = p;
  g.alpha = 0.5 * (n + nu) - epsilon;
  // Conservative constant: the absorption step needs C <= eps^alpha while
  // the stated bound is C <= eps^{1/alpha}; take the minimum of both.
  g.C = std::min(std::pow(epsilon, g.alpha), std::pow(epsilon, 1.0 / g.alpha));
  g.t0 = std::max(t0, std::pow(g.C, 1.0 / g.alpha));
  bar.params_ = g;

  auto value = [&](double r, double t) {
    const double T = t + g.t0;
    return g.C * std::pow(T, -g.alpha) * std::exp(-r * r / (4.0 * T));
  };
  auto defect = [&](double r, double t) {
    const double T = t + g.t0;
    const double v = value(r, t);
    const double vr = -r / (2.0 * T) * v;
    const double vrr = (r * r / (4.0 * T * T) - 1.0 / (2.0 * T)) * v;
    const double vt = (-g.alpha / T + r * r / (4.0 * T * T)) * v;
    return vt - vrr - (m.mean_curvature(r) + drift.value(r)) * vr -
           std::pow(v, p);
  };

  Eigen::ArrayXd radii(grid.nr + 1);
  radii[0] = kOriginProxy;
  radii.tail(grid.nr) = log_spaced(1e-4, grid.r_max, grid.nr);
  double worst = kInf;
  for (int j = 0; j < grid.nt; ++j) {
    const double t = grid.t_max * j / (grid.nt - 1.0);
    for (int i = 0; i < radii.size(); ++i) {
      const double v = value(radii[i], t);
      if (v == 0.0) continue;  // underflowed tail, vacuous inequality
      worst = std::min(worst, defect(radii[i], t) / v);
    }
  }
  bar.cert_.min_relative_defect = worst;

  auto& checks = bar.cert_.checks;
  checks.push_back(make_row("reaction_exponent", "p > 1 + 2/(n + nu)", p_low,
                            p, (p_low - p) / std::max(1.0, p_low)));
  checks.push_back(make_row("parabolic_defect_nonnegative",
                            "dt(u) - D(u) - b u_r - u^p >= 0 on the space-time grid",
                            kNaN, worst, -worst - kDefectTol));
  checks.push_back(make_row("bounded_by_one", "0 < u <= 1",
                            1.0, value(0.0, 0.0),
                            (value(0.0, 0.0) - 1.0)));
  for (auto& row : drift.verify_declared_bounds(m, 1e-4, grid.r_max, 1024))
    checks.push_back(row);
  return bar;
}

double stationary_defect(const Barrier& b, const ModelManifold& m,
                         const RadialDriftField& drift, double lambda,
                         double r) {
  if (!(r > 0))
    throw std::domain_error("stationary_defect: r > 0 required");
  switch (b.family()) {
    case Barrier::Family::phi:
    case Barrier::Family::eta:
      return b.d2(r) + (m.mean_curvature(r) - drift.value(r)) * b.d1(r) +
             (lambda - drift.divergence(r, m)) * b.value(r);
    case Barrier::Family::w:
      return -(b.d2(r) + (m.mean_curvature(r) + drift.value(r)) * b.d1(r) +
               lambda * b.value(r));
    case Barrier::Family::gaussian_super:
      throw UsageError(
          "stationary_defect: gaussian supersolutions use parabolic_defect");
  }
  return 0;
}

double parabolic_defect(const Barrier& b, const ModelManifold& m,
                        const RadialDriftField& drift, double p, double r,
                        double t) {
  if (b.family() != Barrier::Family::gaussian_super)
    throw UsageError("parabolic_defect: only gaussian supersolutions");
  if (!(r > 0))
    throw std::domain_error("parabolic_defect: r > 0 required");
  return b.dt(r, t) -
         (b.d2(r, t) + (m.mean_curvature(r) + drift.value(r)) * b.d1(r, t)) -
         std::pow(b.value(r, t), p);
}

}  // namespace heatlab
