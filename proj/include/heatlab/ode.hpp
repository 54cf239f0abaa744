#pragma once

#include <Eigen/Dense>
#include <functional>

namespace heatlab {

using OdeRhs =
    std::function<void(double, const Eigen::ArrayXd&, Eigen::ArrayXd&)>;

struct OdeOptions {
  double rel_tol = 1e-12;
  double abs_tol = 1e-30;
  double h_init = 1e-6;
  double h_min = 1e-14;
  double h_max = 0.0;  // 0 = unrestricted
};

// Adaptive Runge-Kutta-Fehlberg 7(8). Integrates y' = f(t, y) from t0 to t1
// (t1 > t0) and returns y(t1).
Eigen::ArrayXd integrate_rkf78(const OdeRhs& rhs, double t0,
                               const Eigen::ArrayXd& y0, double t1,
                               const OdeOptions& opts = {});

// Same integrator, but emits the state at each of the strictly increasing
// sample times (all > t0). Steps are clamped so every sample is hit exactly.
void integrate_rkf78_sampled(
    const OdeRhs& rhs, double t0, const Eigen::ArrayXd& y0,
    const Eigen::ArrayXd& sample_times,
    const std::function<void(int, double, const Eigen::ArrayXd&)>& emit,
    const OdeOptions& opts = {});

// Adaptive Cash-Karp 4(5) for a scalar ODE y' = f(t, y), integrating until
// y >= y_stop. Returns the first accepted state at or past the stop level
// (the final step is shortened so y_end <= 2 * y_stop).
struct ScalarStop {
  double t;
  double y;
};
ScalarStop integrate_ck45_until(const std::function<double(double, double)>& f,
                                double t0, double y0, double y_stop,
                                const OdeOptions& opts = {});

}  // namespace heatlab
