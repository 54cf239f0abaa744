#include "heatlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "heatlab/common.hpp"
#include "heatlab/geometry.hpp"

namespace heatlab {

namespace {

// Newton iteration on the Legendre polynomial, exploiting root symmetry.
void compute_gl(int n, Eigen::ArrayXd& x, Eigen::ArrayXd& w) {
  x.resize(n);
  w.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 1; i <= m; ++i) {
    double z = std::cos(kPi * (i - 0.25) / (n + 0.5));
    double pp = 0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15) break;
    }
    x[i - 1] = -z;
    x[n - i] = z;
    w[i - 1] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[n - i] = w[i - 1];
  }
}

std::mutex g_cache_mutex;
std::map<int, std::pair<Eigen::ArrayXd, Eigen::ArrayXd>> g_cache;

}  // namespace

void gauss_legendre_nodes(int n, Eigen::ArrayXd& x, Eigen::ArrayXd& w) {
  if (n < 1) throw std::domain_error("gauss_legendre_nodes: n >= 1 required");
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  auto it = g_cache.find(n);
  if (it == g_cache.end()) {
    std::pair<Eigen::ArrayXd, Eigen::ArrayXd> nw;
    compute_gl(n, nw.first, nw.second);
    it = g_cache.emplace(n, std::move(nw)).first;
  }
  x = it->second.first;
  w = it->second.second;
}

static int auto_panels(double length) {
  const int p = static_cast<int>(std::ceil(length / 2.5));
  return std::clamp(p, 16, 4096);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureRule& rule) {
  if (!(b > a)) throw std::domain_error("integrate: b > a required");
  Eigen::ArrayXd x, w;
  gauss_legendre_nodes(rule.nodes_per_panel, x, w);
  const int panels = rule.panels > 0 ? rule.panels : auto_panels(b - a);
  const double dx = (b - a) / panels;
  double total = 0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * dx;
    const double mid = lo + 0.5 * dx;
    double acc = 0;
    for (int i = 0; i < x.size(); ++i) {
      const double r = mid + 0.5 * dx * x[i];
      const double v = f(r);
      if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg << "integrate: non-finite integrand at r = " << r;
        throw NumericError(msg.str());
      }
      acc += w[i] * v;
    }
    total += 0.5 * dx * acc;
  }
  return total;
}

double unit_sphere_area(int n) {
  if (n < 1) throw std::domain_error("unit_sphere_area: n >= 1 required");
  return 2.0 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n);
}

double integrate_radial(const std::function<double(double)>& f,
                        const ModelManifold& m, double r_lo, double r_max,
                        const QuadratureRule& rule) {
  if (!(r_lo >= 0 && r_max > r_lo))
    throw std::domain_error("integrate_radial: 0 <= r_lo < r_max required");
  const double omega = unit_sphere_area(m.dim());
  const int nm1 = m.dim() - 1;
  auto weighted = [&](double r) {
    const double fv = f(r);
    if (fv == 0.0) return 0.0;
    return fv * std::pow(m.psi(r), nm1);
  };
  return omega * integrate(weighted, r_lo, r_max, rule);
}

double integrate_radial(const std::function<double(double)>& f,
                        const ModelManifold& m, double r_max,
                        const QuadratureRule& rule) {
  return integrate_radial(f, m, 0.0, r_max, rule);
}

}  // namespace heatlab
