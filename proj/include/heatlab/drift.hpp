#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "heatlab/certificates.hpp"

namespace heatlab {

class ModelManifold;

enum class DriftKind { none, constant_radial, inverse_r, sampled };

// Declared bounds on the radial drift; re-checked on grids, never trusted.
struct DriftBounds {
  std::optional<double> b0;         // b(r) >= b0 everywhere
  std::optional<double> b1;         // b(r) >= b1 (spectral-gap role)
  std::optional<double> sigma;      // b(r) >= -sigma / r
  std::optional<double> nu;         // b(r) >= nu / r
  std::optional<double> div_upper;  // div b <= C
};

// Radial component b(r) = <b, d/dr> of the drift field, together with its
// derivative and divergence div b = b' + F b. Immutable and reentrant.
class RadialDriftField {
 public:
  static RadialDriftField none();
  static RadialDriftField constant_radial(double c);
  // b(r) = nu / r; nu > -n is required downstream for a finite effective
  // dimension at the origin.
  static RadialDriftField inverse_r(double nu);
  static RadialDriftField sampled(const Eigen::ArrayXd& r,
                                  const Eigen::ArrayXd& b);

  DriftKind kind() const { return kind_; }
  double value(double r) const;  // r > 0
  double d1(double r) const;
  double divergence(double r, const ModelManifold& m) const;
  // lim_{r -> 0} r b(r): 0 except nu for inverse_r.
  double r_times_value_limit() const;

  DriftBounds bounds;

  // Grid check of every declared bound; one row per bound.
  std::vector<ConstraintCheck> verify_declared_bounds(const ModelManifold& m,
                                                      double r_min,
                                                      double r_max,
                                                      int grid_points) const;

 private:
  RadialDriftField() = default;
  DriftKind kind_ = DriftKind::none;
  double param_ = 0;
  Eigen::ArrayXd table_r_, table_b_, table_s_;  // sampled kind
};

}  // namespace heatlab
