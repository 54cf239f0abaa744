#pragma once

#include <Eigen/Dense>
#include <functional>

namespace heatlab {

class ModelManifold;

// Composite Gauss-Legendre rule. panels == 0 lets integrate() pick a panel
// count from the interval length (one panel per ~2.5 length units, clamped
// to [16, 4096]).
struct QuadratureRule {
  int nodes_per_panel = 32;
  int panels = 0;
};

// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
void gauss_legendre_nodes(int n, Eigen::ArrayXd& x, Eigen::ArrayXd& w);

// Composite Gauss-Legendre integral of f over [a, b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureRule& rule = {});

// Surface area of the unit (n-1)-sphere, 2 pi^{n/2} / Gamma(n/2).
double unit_sphere_area(int n);

// Integral of a radial function over the metric ball of radius r_max:
//   omega_{n-1} * \int_0^{r_max} f(r) psi(r)^{n-1} dr.
// Throws NumericError when a sampled value is not finite.
double integrate_radial(const std::function<double(double)>& f,
                        const ModelManifold& m, double r_max,
                        const QuadratureRule& rule = {});

// Same weighted integral over [r_lo, r_max]; panels never straddle the
// endpoints, so piecewise-smooth integrands keep full accuracy when split.
double integrate_radial(const std::function<double(double)>& f,
                        const ModelManifold& m, double r_lo, double r_max,
                        const QuadratureRule& rule);

}  // namespace heatlab
