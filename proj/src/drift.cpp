#include "heatlab/drift.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "heatlab/geometry.hpp"

namespace heatlab {

RadialDriftField RadialDriftField::none() {
  RadialDriftField d;
  d.kind_ = DriftKind::none;
  d.bounds.b0 = 0.0;
  d.bounds.b1 = 0.0;
  d.bounds.sigma = 0.0;
  d.bounds.nu = 0.0;
  d.bounds.div_upper = 0.0;
  return d;
}

RadialDriftField RadialDriftField::constant_radial(double c) {
  RadialDriftField d;
  d.kind_ = DriftKind::constant_radial;
  d.param_ = c;
  d.bounds.b0 = c;
  d.bounds.b1 = c;
  return d;
}

RadialDriftField RadialDriftField::inverse_r(double nu) {
  RadialDriftField d;
  d.kind_ = DriftKind::inverse_r;
  d.param_ = nu;
  if (nu <= 0) {
    d.bounds.nu = nu;
    d.bounds.sigma = -nu;
  }
  return d;
}

RadialDriftField RadialDriftField::sampled(const Eigen::ArrayXd& r,
                                           const Eigen::ArrayXd& b) {
  if (r.size() < 2 || r.size() != b.size())
    throw ConfigError("sampled drift: need matching r/b tables, length >= 2");
  for (int i = 0; i + 1 < r.size(); ++i)
    if (!(r[i] > 0) || !(r[i + 1] > r[i]))
      throw ConfigError("sampled drift: radii must be positive and increasing");
  RadialDriftField d;
  d.kind_ = DriftKind::sampled;
  d.table_r_ = r;
  d.table_b_ = b;
  const int n = static_cast<int>(r.size());
  d.table_s_.resize(n);
  for (int i = 0; i < n; ++i) {
    const int lo = std::max(i - 1, 0), hi = std::min(i + 1, n - 1);
    d.table_s_[i] = (b[hi] - b[lo]) / (r[hi] - r[lo]);
  }
  return d;
}

double RadialDriftField::value(double r) const {
  switch (kind_) {
    case DriftKind::none:
      return 0.0;
    case DriftKind::constant_radial:
      return param_;
    case DriftKind::inverse_r:
      return param_ / r;
    case DriftKind::sampled: {
      const int n = static_cast<int>(table_r_.size());
      if (r <= table_r_[0]) return table_b_[0];
      if (r >= table_r_[n - 1]) return table_b_[n - 1];
      const double* begin = table_r_.data();
      const int i =
          static_cast<int>(std::upper_bound(begin, begin + n, r) - begin) - 1;
      const double dx = table_r_[i + 1] - table_r_[i];
      const double s = (r - table_r_[i]) / dx;
      const double s2 = s * s, s3 = s2 * s;
      return (2 * s3 - 3 * s2 + 1) * table_b_[i] +
             (s3 - 2 * s2 + s) * dx * table_s_[i] +
             (-2 * s3 + 3 * s2) * table_b_[i + 1] +
             (s3 - s2) * dx * table_s_[i + 1];
    }
  }
  return 0;
}

double RadialDriftField::d1(double r) const {
  switch (kind_) {
    case DriftKind::none:
    case DriftKind::constant_radial:
      return 0.0;
    case DriftKind::inverse_r:
      return -param_ / (r * r);
    case DriftKind::sampled: {
      const int n = static_cast<int>(table_r_.size());
      if (r <= table_r_[0] || r >= table_r_[n - 1]) return 0.0;
      const double* begin = table_r_.data();
      const int i =
          static_cast<int>(std::upper_bound(begin, begin + n, r) - begin) - 1;
      const double dx = table_r_[i + 1] - table_r_[i];
      const double s = (r - table_r_[i]) / dx;
      const double s2 = s * s;
      return ((6 * s2 - 6 * s) * table_b_[i] / dx +
              (3 * s2 - 4 * s + 1) * table_s_[i] +
              (-6 * s2 + 6 * s) * table_b_[i + 1] / dx +
              (3 * s2 - 2 * s) * table_s_[i + 1]);
    }
  }
  return 0;
}

double RadialDriftField::divergence(double r, const ModelManifold& m) const {
  return d1(r) + m.mean_curvature(r) * value(r);
}

double RadialDriftField::r_times_value_limit() const {
  return kind_ == DriftKind::inverse_r ? param_ : 0.0;
}

std::vector<ConstraintCheck> RadialDriftField::verify_declared_bounds(
    const ModelManifold& m, double r_min, double r_max,
    int grid_points) const {
  const Eigen::ArrayXd grid = log_spaced(r_min, r_max, grid_points);
  auto scan = [&](const std::function<double(double)>& lhs_minus_rhs) {
    double worst = -kInf;
    for (int i = 0; i < grid.size(); ++i)
      worst = std::max(worst, lhs_minus_rhs(grid[i]));
    return worst - 1e-9;
  };
  auto rel = [](double lhs, double rhs) {
    return (lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
  };

  std::vector<ConstraintCheck> rows;
  auto push = [&](const std::string& name, const std::string& eq,
                  double bound, double worst) {
    ConstraintCheck c;
    c.constraint = name;
    c.paper_eq = eq;
    c.closed_form_bound = bound;
    c.max_violation = worst;
    c.pass = worst <= 0;
    rows.push_back(c);
  };

  if (bounds.b0) {
    const double b0 = *bounds.b0;
    push("drift_lower_bound", "b(r) >= b0", b0,
         scan([&](double r) { return rel(b0, value(r)); }));
  }
  if (bounds.b1) {
    const double b1 = *bounds.b1;
    push("drift_lower_bound_b1", "b(r) >= b1", b1,
         scan([&](double r) { return rel(b1, value(r)); }));
  }
  if (bounds.sigma) {
    const double s = *bounds.sigma;
    push("drift_inverse_lower_bound", "b(r) >= -sigma / r", s,
         scan([&](double r) { return rel(-s / r, value(r)); }));
  }
  if (bounds.nu) {
    const double nu = *bounds.nu;
    push("drift_inverse_lower_bound_nu", "b(r) >= nu / r", nu,
         scan([&](double r) { return rel(nu / r, value(r)); }));
  }
  if (bounds.div_upper) {
    const double cap = *bounds.div_upper;
    push("divergence_upper_bound", "div b(r) <= C", cap,
         scan([&](double r) { return rel(divergence(r, m), cap); }));
  }
  return rows;
}

}  // namespace heatlab
