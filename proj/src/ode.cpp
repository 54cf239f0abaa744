#include "heatlab/ode.hpp"

#include <algorithm>
#include <cmath>

#include "heatlab/common.hpp"

namespace heatlab {

namespace {

// Fehlberg 7(8), 13 stages.
constexpr int kStages = 13;

const double kC[kStages] = {0.0,       2.0 / 27, 1.0 / 9, 1.0 / 6, 5.0 / 12,
                            1.0 / 2,   5.0 / 6,  1.0 / 6, 2.0 / 3, 1.0 / 3,
                            1.0,       0.0,      1.0};

const double kA[kStages][kStages - 1] = {
    {},
    {2.0 / 27},
    {1.0 / 36, 1.0 / 12},
    {1.0 / 24, 0, 1.0 / 8},
    {5.0 / 12, 0, -25.0 / 16, 25.0 / 16},
    {1.0 / 20, 0, 0, 1.0 / 4, 1.0 / 5},
    {-25.0 / 108, 0, 0, 125.0 / 108, -65.0 / 27, 125.0 / 54},
    {31.0 / 300, 0, 0, 0, 61.0 / 225, -2.0 / 9, 13.0 / 900},
    {2.0, 0, 0, -53.0 / 6, 704.0 / 45, -107.0 / 9, 67.0 / 90, 3.0},
    {-91.0 / 108, 0, 0, 23.0 / 108, -976.0 / 135, 311.0 / 54, -19.0 / 60,
     17.0 / 6, -1.0 / 12},
    {2383.0 / 4100, 0, 0, -341.0 / 164, 4496.0 / 1025, -301.0 / 82,
     2133.0 / 4100, 45.0 / 82, 45.0 / 164, 18.0 / 41},
    {3.0 / 205, 0, 0, 0, 0, -6.0 / 41, -3.0 / 205, -3.0 / 41, 3.0 / 41,
     6.0 / 41, 0},
    {-1777.0 / 4100, 0, 0, -341.0 / 164, 4496.0 / 1025, -289.0 / 82,
     2193.0 / 4100, 51.0 / 82, 33.0 / 164, 12.0 / 41, 0, 1.0}};

// 8th-order solution weights.
const double kB8[kStages] = {0,          0, 0, 0, 0,
                             34.0 / 105, 9.0 / 35, 9.0 / 35, 9.0 / 280,
                             9.0 / 280,  0, 41.0 / 840, 41.0 / 840};

struct Stepper {
  const OdeRhs& rhs;
  Eigen::ArrayXd k[kStages];
  Eigen::ArrayXd ytmp;

  explicit Stepper(const OdeRhs& f, int dim) : rhs(f) {
    for (auto& ki : k) ki.resize(dim);
    ytmp.resize(dim);
  }

  // One trial step; fills ynew and the embedded error estimate.
  void step(double t, const Eigen::ArrayXd& y, double h, Eigen::ArrayXd& ynew,
            double& err_norm, double rel_tol, double abs_tol) {
    rhs(t, y, k[0]);
    for (int s = 1; s < kStages; ++s) {
      ytmp = y;
      for (int j = 0; j < s; ++j) {
        if (kA[s][j] != 0.0) ytmp += (h * kA[s][j]) * k[j];
      }
      rhs(t + kC[s] * h, ytmp, k[s]);
    }
    ynew = y;
    for (int s = 0; s < kStages; ++s) {
      if (kB8[s] != 0.0) ynew += (h * kB8[s]) * k[s];
    }
    // Fehlberg's error estimate: (41/840) h (k1 + k11 - k12 - k13).
    Eigen::ArrayXd err =
        (41.0 / 840) * h * (k[0] + k[10] - k[11] - k[12]);
    err_norm = 0;
    for (int i = 0; i < y.size(); ++i) {
      const double scale =
          abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err_norm = std::max(err_norm, std::abs(err[i]) / scale);
    }
  }
};

}  // namespace

static void rkf78_drive(
    const OdeRhs& rhs, double t0, const Eigen::ArrayXd& y0, double t1,
    const OdeOptions& opts,
    const std::function<void(double, const Eigen::ArrayXd&)>& on_accept) {
  if (!(t1 > t0)) throw std::domain_error("integrate_rkf78: t1 > t0 required");
  Stepper st(rhs, static_cast<int>(y0.size()));
  Eigen::ArrayXd y = y0, ynew(y0.size());
  double t = t0;
  double h = std::min(opts.h_init, t1 - t0);
  const double h_max = opts.h_max > 0 ? opts.h_max : t1 - t0;
  while (t < t1) {
    h = std::min(h, t1 - t);
    double err = 0;
    st.step(t, y, h, ynew, err, opts.rel_tol, opts.abs_tol);
    if (err <= 1.0) {
      t += h;
      y = ynew;
      on_accept(t, y);
      const double grow = err > 0 ? 0.9 * std::pow(err, -1.0 / 8.0) : 5.0;
      h = std::min({h * std::clamp(grow, 0.2, 5.0), h_max});
    } else {
      h *= std::max(0.9 * std::pow(err, -1.0 / 8.0), 0.2);
      if (h < opts.h_min)
        throw NumericError("integrate_rkf78: step size underflow");
    }
  }
}

Eigen::ArrayXd integrate_rkf78(const OdeRhs& rhs, double t0,
                               const Eigen::ArrayXd& y0, double t1,
                               const OdeOptions& opts) {
  Eigen::ArrayXd out = y0;
  rkf78_drive(rhs, t0, y0, t1, opts,
              [&](double, const Eigen::ArrayXd& y) { out = y; });
  return out;
}

void integrate_rkf78_sampled(
    const OdeRhs& rhs, double t0, const Eigen::ArrayXd& y0,
    const Eigen::ArrayXd& sample_times,
    const std::function<void(int, double, const Eigen::ArrayXd&)>& emit,
    const OdeOptions& opts) {
  Eigen::ArrayXd y = y0;
  double t = t0;
  for (int i = 0; i < sample_times.size(); ++i) {
    const double ts = sample_times[i];
    if (!(ts > t))
      throw std::domain_error("integrate_rkf78_sampled: samples must increase");
    y = integrate_rkf78(rhs, t, y, ts, opts);
    t = ts;
    emit(i, t, y);
  }
}

ScalarStop integrate_ck45_until(const std::function<double(double, double)>& f,
                                double t0, double y0, double y_stop,
                                const OdeOptions& opts) {
  // Cash-Karp 4(5) coefficients.
  static const double c2 = 0.2, c3 = 0.3, c4 = 0.6, c5 = 1.0, c6 = 0.875;
  static const double a21 = 0.2;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 0.3, a42 = -0.9, a43 = 1.2;
  static const double a51 = -11.0 / 54, a52 = 2.5, a53 = -70.0 / 27,
                      a54 = 35.0 / 27;
  static const double a61 = 1631.0 / 55296, a62 = 175.0 / 512,
                      a63 = 575.0 / 13824, a64 = 44275.0 / 110592,
                      a65 = 253.0 / 4096;
  static const double b1 = 37.0 / 378, b3 = 250.0 / 621, b4 = 125.0 / 594,
                      b6 = 512.0 / 1771;
  static const double d1 = b1 - 2825.0 / 27648, d3 = b3 - 18575.0 / 48384,
                      d4 = b4 - 13525.0 / 55296, d5 = -277.0 / 14336,
                      d6 = b6 - 0.25;

  if (y0 >= y_stop) return {t0, y0};
  double t = t0, y = y0;
  double h = opts.h_init;
  auto attempt = [&](double hh, double& ynew, double& err) {
    const double k1 = f(t, y);
    const double k2 = f(t + c2 * hh, y + hh * a21 * k1);
    const double k3 = f(t + c3 * hh, y + hh * (a31 * k1 + a32 * k2));
    const double k4 = f(t + c4 * hh, y + hh * (a41 * k1 + a42 * k2 + a43 * k3));
    const double k5 =
        f(t + c5 * hh, y + hh * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const double k6 =
        f(t + c6 * hh,
          y + hh * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    ynew = y + hh * (b1 * k1 + b3 * k3 + b4 * k4 + b6 * k6);
    err = std::abs(hh * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6));
  };
  const long max_steps = 200000000L;
  for (long step = 0; step < max_steps; ++step) {
    if (y >= y_stop) return {t, y};
    double ynew = y, err = 0;
    attempt(h, ynew, err);
    const double scale =
        opts.abs_tol + opts.rel_tol * std::max(std::abs(y), std::abs(ynew));
    if (err <= scale && std::isfinite(ynew)) {
      if (ynew > 2.0 * y_stop && y < y_stop) {
        // Overshot; refine the final step so the stop level is hit tightly.
        h *= 0.5;
        if (h < opts.h_min) return {t, y};
        continue;
      }
      t += h;
      y = ynew;
      const double grow =
          err > 0 ? 0.9 * std::pow(scale / err, 0.2) : 5.0;
      h *= std::clamp(grow, 0.2, 5.0);
    } else {
      h *= std::max(0.9 * std::pow(scale / std::max(err, 1e-300), 0.25), 0.1);
      if (h < opts.h_min)
        throw NumericError("integrate_ck45_until: step size underflow");
    }
  }
  throw NumericError("integrate_ck45_until: step budget exhausted");
}

}  // namespace heatlab
