#include "heatlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "heatlab/common.hpp"
#include "heatlab/ode.hpp"
#include "heatlab/quadrature.hpp"

namespace heatlab {

namespace {

// Below this radius, psi'/psi is evaluated by its series 1/r + q0 r / 3.
constexpr double kSeriesRadius = 1e-6;

// ricci_decay profile table extent and density.
constexpr double kTableLo = 1e-6;
constexpr double kTableHi = 1e6;
constexpr int kTableSamplesPerDecade = 1000;

double hermite(double x, double x0, double x1, double f0, double d0, double f1,
               double d1) {
  const double dx = x1 - x0;
  const double s = (x - x0) / dx;
  const double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * f0 + (s3 - 2 * s2 + s) * dx * d0 +
         (-2 * s3 + 3 * s2) * f1 + (s3 - s2) * dx * d1;
}

}  // namespace

Eigen::ArrayXd log_spaced(double lo, double hi, int n) {
  if (!(lo > 0 && hi > lo && n >= 2))
    throw std::domain_error("log_spaced: need 0 < lo < hi and n >= 2");
  return Eigen::ArrayXd::LinSpaced(n, std::log(lo), std::log(hi)).exp();
}

double ModelManifold::ProfileTable::eval_psi(double x) const {
  if (x <= r[0]) return x + beta_bar * x * x * x / 6.0;
  const int n = static_cast<int>(r.size());
  if (x >= r[n - 1])
    return psi[n - 1] * std::pow(x / r[n - 1], tail_exponent);
  const double* begin = r.data();
  const int i =
      static_cast<int>(std::upper_bound(begin, begin + n, x) - begin) - 1;
  return hermite(x, r[i], r[i + 1], psi[i], dpsi[i], psi[i + 1], dpsi[i + 1]);
}

double ModelManifold::ProfileTable::eval_dpsi(double x) const {
  if (x <= r[0]) return 1.0 + beta_bar * x * x / 2.0;
  const int n = static_cast<int>(r.size());
  if (x >= r[n - 1]) {
    const double p = psi[n - 1] * std::pow(x / r[n - 1], tail_exponent);
    return tail_exponent * p / x;
  }
  const double* begin = r.data();
  const int i =
      static_cast<int>(std::upper_bound(begin, begin + n, x) - begin) - 1;
  auto dd = [&](int j) { return beta_bar / (1.0 + r[j] * r[j]) * psi[j]; };
  return hermite(x, r[i], r[i + 1], dpsi[i], dd(i), dpsi[i + 1], dd(i + 1));
}

ModelManifold ModelManifold::euclidean(int n) {
  if (n < 2) throw ConfigError("manifold: dimension n >= 2 required");
  ModelManifold m;
  m.kind_ = ManifoldKind::euclidean;
  m.n_ = n;
  m.param_ = 0;
  return m;
}

ModelManifold ModelManifold::hyperbolic(int n, double h) {
  if (n < 2) throw ConfigError("manifold: dimension n >= 2 required");
  if (!(h > 0)) throw ConfigError("manifold: hyperbolic requires h > 0");
  ModelManifold m;
  m.kind_ = ManifoldKind::hyperbolic;
  m.n_ = n;
  m.param_ = h;
  return m;
}

ModelManifold ModelManifold::ricci_decay(int n, double beta_bar) {
  if (n < 2) throw ConfigError("manifold: dimension n >= 2 required");
  if (!(beta_bar > 0))
    throw ConfigError("manifold: ricci_decay requires beta_bar > 0");
  ModelManifold m;
  m.kind_ = ManifoldKind::ricci_decay;
  m.n_ = n;
  m.param_ = beta_bar;

  auto table = std::make_shared<ProfileTable>();
  table->beta_bar = beta_bar;
  const int decades = static_cast<int>(std::round(std::log10(kTableHi / kTableLo)));
  const int samples = decades * kTableSamplesPerDecade + 1;
  table->r = log_spaced(kTableLo, kTableHi, samples);
  table->psi.resize(samples);
  table->dpsi.resize(samples);

  OdeRhs rhs = [beta_bar](double r, const Eigen::ArrayXd& y,
                          Eigen::ArrayXd& dy) {
    dy[0] = y[1];
    dy[1] = beta_bar / (1.0 + r * r) * y[0];
  };
  Eigen::ArrayXd y0(2);
  y0 << 0.0, 1.0;
  OdeOptions opts;
  opts.rel_tol = 1e-12;
  opts.abs_tol = 1e-30;
  opts.h_init = kTableLo;
  integrate_rkf78_sampled(
      rhs, 0.0, y0, table->r,
      [&](int i, double, const Eigen::ArrayXd& y) {
        table->psi[i] = y[0];
        table->dpsi[i] = y[1];
      },
      opts);

  // Asymptotic growth exponent from the last decade; psi ~ c r^gamma there.
  const int last = samples - 1;
  const int back = last - kTableSamplesPerDecade;
  table->tail_exponent = std::log(table->psi[last] / table->psi[back]) /
                         std::log(table->r[last] / table->r[back]);
  m.table_ = std::move(table);
  return m;
}

double ModelManifold::psi(double r) const {
  if (r < 0) throw std::domain_error("psi: r >= 0 required");
  switch (kind_) {
    case ManifoldKind::euclidean:
      return r;
    case ManifoldKind::hyperbolic:
      return std::sinh(param_ * r) / param_;
    case ManifoldKind::ricci_decay:
      return table_->eval_psi(r);
  }
  return 0;
}

double ModelManifold::psi_d1(double r) const {
  if (r < 0) throw std::domain_error("psi_d1: r >= 0 required");
  switch (kind_) {
    case ManifoldKind::euclidean:
      return 1.0;
    case ManifoldKind::hyperbolic:
      return std::cosh(param_ * r);
    case ManifoldKind::ricci_decay:
      return table_->eval_dpsi(r);
  }
  return 0;
}

double ModelManifold::log_psi(double r) const {
  if (!(r > 0)) throw std::domain_error("log_psi: r > 0 required");
  switch (kind_) {
    case ManifoldKind::euclidean:
      return std::log(r);
    case ManifoldKind::hyperbolic:
      // log(sinh(h r)/h) = h r + log1p(-exp(-2 h r)) - log(2 h)
      return param_ * r + std::log1p(-std::exp(-2.0 * param_ * r)) -
             std::log(2.0 * param_);
    case ManifoldKind::ricci_decay:
      return std::log(table_->eval_psi(r));
  }
  return 0;
}

double ModelManifold::psi_d2(double r) const {
  if (r < 0) throw std::domain_error("psi_d2: r >= 0 required");
  switch (kind_) {
    case ManifoldKind::euclidean:
      return 0.0;
    case ManifoldKind::hyperbolic:
      return param_ * std::sinh(param_ * r);
    case ManifoldKind::ricci_decay:
      return param_ / (1.0 + r * r) * table_->eval_psi(r);
  }
  return 0;
}

double ModelManifold::q0() const {
  switch (kind_) {
    case ManifoldKind::euclidean:
      return 0.0;
    case ManifoldKind::hyperbolic:
      return param_ * param_;
    case ManifoldKind::ricci_decay:
      return param_;
  }
  return 0;
}

double ModelManifold::mean_curvature(double r) const {
  if (!(r > 0)) throw std::domain_error("mean_curvature: r > 0 required");
  const double nm1 = n_ - 1;
  if (r < kSeriesRadius) return nm1 * (1.0 / r + q0() * r / 3.0);
  switch (kind_) {
    case ManifoldKind::euclidean:
      return nm1 / r;
    case ManifoldKind::hyperbolic:
      return nm1 * param_ / std::tanh(param_ * r);
    case ManifoldKind::ricci_decay:
      return nm1 * table_->eval_dpsi(r) / table_->eval_psi(r);
  }
  return 0;
}

double ModelManifold::r_times_mean_curvature(double r) const {
  if (r == 0.0) return n_ - 1.0;
  return r * mean_curvature(r);
}

double ModelManifold::sectional_radial(double r) const {
  if (!(r > 0)) throw std::domain_error("sectional_radial: r > 0 required");
  switch (kind_) {
    case ManifoldKind::euclidean:
      return 0.0;
    case ManifoldKind::hyperbolic:
      return -param_ * param_;
    case ManifoldKind::ricci_decay:
      return -param_ / (1.0 + r * r);
  }
  return 0;
}

double ModelManifold::ricci_radial(double r) const {
  return (n_ - 1.0) * sectional_radial(r);
}

double ModelManifold::sphere_area(double R) const {
  if (!(R > 0)) throw std::domain_error("sphere_area: R > 0 required");
  const double p = psi(R);
  return unit_sphere_area(n_) * std::pow(p, n_ - 1);
}

AssumptionTarget AssumptionTarget::A0(double h1, double h2) {
  if (!(h1 > 0) || !(h2 > 0))
    throw std::domain_error("A0 target: h1 > 0 and h2 > 0 required");
  AssumptionTarget t;
  t.type = Type::A0;
  t.h1 = h1;
  t.h2 = h2;
  return t;
}

AssumptionTarget AssumptionTarget::A1(double beta_bar) {
  if (beta_bar < 0)
    throw std::domain_error("A1 target: beta_bar >= 0 required");
  AssumptionTarget t;
  t.type = Type::A1;
  t.beta_bar = beta_bar;
  return t;
}

std::string AssumptionTarget::label() const {
  std::ostringstream os;
  if (type == Type::A0)
    os << "A0(h1=" << h1 << ", h2=" << h2 << ")";
  else
    os << "A1(beta_bar=" << beta_bar << ")";
  return os.str();
}

AssumptionCertificate check_curvature_assumptions(const ModelManifold& m,
                                                  const AssumptionTarget& t,
                                                  double r_min, double r_max,
                                                  int grid_points) {
  if (!(0 < r_min && r_min < r_max))
    throw std::domain_error("check_curvature_assumptions: 0 < r_min < r_max");
  if (grid_points < 2)
    throw std::domain_error("check_curvature_assumptions: grid_points >= 2");

  const Eigen::ArrayXd grid = log_spaced(r_min, r_max, grid_points);
  const double nm1 = m.dim() - 1.0;
  // Relative residual of the inequality lhs <= rhs (positive = violated).
  auto rel = [](double lhs, double rhs) {
    const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    return (lhs - rhs) / scale;
  };

  double worst = -kInf;
  double c1 = 0;
  for (int i = 0; i < grid.size(); ++i) {
    const double r = grid[i];
    const double K = m.sectional_radial(r);
    const double F = m.mean_curvature(r);
    c1 = std::max(c1, r * F / nm1);
    if (t.type == AssumptionTarget::Type::A0) {
      worst = std::max(worst, rel(K, -t.h1 * t.h1));
      worst = std::max(worst, rel(-nm1 * t.h2 * t.h2, nm1 * K));
      worst = std::max(worst, rel(nm1 * t.h1 / std::tanh(t.h1 * r), F));
      worst = std::max(worst, rel(F, nm1 * t.h2 / std::tanh(t.h2 * r)));
    } else {
      const double bound = -nm1 * t.beta_bar / (1.0 + r * r);
      worst = std::max(worst, rel(bound, nm1 * K));
      worst = std::max(worst, rel(nm1 / r, F));
    }
  }

  AssumptionCertificate cert;
  cert.assumption = t.label();
  cert.r_min = r_min;
  cert.r_max = r_max;
  cert.grid_points = grid_points;
  cert.max_violation = worst - 1e-9;
  cert.pass = cert.max_violation <= 0;
  cert.measured_c1 = c1;
  return cert;
}

double gamma_exponent(double beta_bar) {
  if (beta_bar < 0)
    throw std::domain_error("gamma_exponent: beta_bar >= 0 required");
  return 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * beta_bar));
}

double fitted_area_growth_exponent(const ModelManifold& m, double R_lo,
                                   double R_hi, int samples) {
  if (samples < 2)
    throw std::domain_error("fitted_area_growth_exponent: samples >= 2");
  const Eigen::ArrayXd R = log_spaced(R_lo, R_hi, samples);
  Eigen::ArrayXd x(samples), y(samples);
  for (int i = 0; i < samples; ++i) {
    x[i] = std::log(R[i]);
    y[i] = std::log(m.sphere_area(R[i]));
  }
  const double xm = x.mean(), ym = y.mean();
  return ((x - xm) * (y - ym)).sum() / ((x - xm).square()).sum();
}

}  // namespace heatlab
