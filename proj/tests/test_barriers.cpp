#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "heatlab/barriers.hpp"
#include "heatlab/quadrature.hpp"

using namespace heatlab;

namespace {
double coth(double x) { return 1.0 / std::tanh(x); }
}

TEST_CASE("admissible a1 interval on the hyperbolic model") {
  auto m = ModelManifold::hyperbolic(3, 1.0);
  auto b = RadialDriftField::none();
  auto iv = admissible_a1(6.0, 0.0, 1.0, 1.0, 0.0, 3, false, m, b);

  // Closed-form branches evaluated directly from the bound.
  CHECK(iv.branch_outer == doctest::Approx(6.0 / (2.0 * coth(1.0))).epsilon(1e-12));
  CHECK(iv.branch_inner ==
        doctest::Approx(6.0 / (1.0 + 2.0 * coth(1.0))).epsilon(1e-12));

  // Grid verification with the exact mean curvature is binding at the
  // origin: defect(0) = lambda - n a1 for R0 = 1, so the supremum is
  // lambda / n = 2 and lies above the closed-form minimum.
  CHECK(iv.verified_hi == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(iv.verified_hi > iv.closed_form_hi);
  // Exactly at the integrability threshold (n-1) h2 = 2: not feasible.
  CHECK_FALSE(iv.integrable_feasible);

  CHECK_THROWS_AS(admissible_a1(0.0, 0.0, 1.0, 1.0, 0.0, 3, false, m, b),
                  ParameterError);
  // b0 = -(n-1) h2 coth(h2 R0) zeroes the outer denominator.
  CHECK_THROWS_AS(
      admissible_a1(6.0, 0.0, 1.0, 1.0, -2.0 * coth(1.0), 3, false, m, b),
      ParameterError);
}

TEST_CASE("phi weight at the boundary lambda stays certified but unnormalized") {
  auto m = ModelManifold::hyperbolic(3, 1.0);
  auto b = RadialDriftField::none();
  Barrier phi = build_phi(m, b, 6.0, 0.0, 1.0, 1.0, 1.0);
  CHECK(phi.certificate().pass());
  CHECK_FALSE(phi.certificate().normalizable);
  CHECK_FALSE(phi.normalization().has_value());
  // a1 pinned at the verified supremum lambda/n = 2.
  CHECK(phi.phi_params().a1 == doctest::Approx(2.0).epsilon(1e-9));
  // Bisection stopping criterion: the minimal relative defect sits in the
  // tolerance band.
  CHECK(phi.certificate().min_relative_defect >= -1e-12);
  CHECK(phi.certificate().min_relative_defect <= 1e-9);
}

TEST_CASE("phi weight with room above the integrability threshold") {
  auto m = ModelManifold::hyperbolic(3, 1.0);
  auto b = RadialDriftField::none();
  Barrier phi = build_phi(m, b, 8.0, 0.0, 1.0, 1.0, 1.0);
  CHECK(phi.certificate().pass());
  CHECK(phi.certificate().normalizable);
  const auto& p = phi.phi_params();
  // Midpoint of ((n-1) h2, lambda/n) = (2, 8/3).
  CHECK(p.a1 == doctest::Approx((2.0 + 8.0 / 3.0) / 2.0).epsilon(1e-9));
  CHECK(p.a2 == doctest::Approx(p.a1 / 2.0));

  // C^1 gluing identities at R0.
  const double vin = p.C2 * std::exp(-p.a2 * p.R0 * p.R0);
  const double vout = p.C1 * std::exp(-p.a1 * p.R0);
  CHECK(vin == doctest::Approx(vout).epsilon(1e-15));
  const double din = -2.0 * p.a2 * p.R0 * vin;
  const double dout = -p.a1 * vout;
  CHECK(din == doctest::Approx(dout).epsilon(1e-15));
  CHECK(phi.value(p.R0 - 1e-12) == doctest::Approx(phi.value(p.R0)).epsilon(1e-10));

  // Normalization: c * \int phi dmu = 1 within quadrature tolerance
  // (integrated piecewise so the gluing kink stays on a panel edge).
  REQUIRE(phi.normalization().has_value());
  const double c = *phi.normalization();
  auto v = [&](double r) { return phi.value(r); };
  const double total = c * (integrate_radial(v, m, 0.0, 1.0, QuadratureRule{}) +
                            integrate_radial(v, m, 1.0, 320.0, QuadratureRule{}));
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));

  // Scaling: doubling C1 doubles the weight pointwise and halves c.
  Barrier phi2 = build_phi(m, b, 8.0, 0.0, 1.0, 1.0, 2.0);
  CHECK(phi2.value(0.7) == doctest::Approx(2.0 * phi.value(0.7)).epsilon(1e-12));
  CHECK(phi2.value(3.1) == doctest::Approx(2.0 * phi.value(3.1)).epsilon(1e-12));
  CHECK(*phi2.normalization() == doctest::Approx(0.5 * c).epsilon(1e-9));

  CHECK_THROWS_AS(build_phi(m, b, 0.0, 0.0, 1.0, 1.0, 1.0), ParameterError);
}

TEST_CASE("eta weight on the euclidean model") {
  auto m = ModelManifold::euclidean(3);
  auto b = RadialDriftField::none();
  // Minimal admissible lambda = 2 a [1 + C1 (n-1) + sigma] = 0.6 for a=0.1.
  Barrier eta = build_eta(m, b, 0.1, 0.6, 0.0, 0.0);
  CHECK(eta.certificate().pass());
  CHECK(eta.certificate().min_relative_defect >= -1e-12);
  CHECK(eta.eta_params().measured_c1 == doctest::Approx(1.0).epsilon(1e-9));

  // k = a^{3/2} / pi^{3/2} on R^3.
  REQUIRE(eta.normalization().has_value());
  CHECK(*eta.normalization() ==
        doctest::Approx(std::pow(0.1 / kPi, 1.5)).epsilon(1e-9));
  const double total = *eta.normalization() *
                       integrate_radial([&](double r) { return eta.value(r); },
                                        m, 40.0);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));

  CHECK_THROWS_AS(build_eta(m, b, 0.0, 0.6, 0.0, 0.0), ParameterError);
  CHECK_THROWS_WITH_AS(build_eta(m, b, 0.1, 0.5, 0.0, 0.0),
                       doctest::Contains("0.6"), ParameterError);
}

TEST_CASE("eta weight on the decaying-Ricci model") {
  auto m = ModelManifold::ricci_decay(3, 2.0);
  auto b = RadialDriftField::none();
  Barrier eta = build_eta(m, b, 0.05, 0.6, 0.0, 0.0);
  CHECK(eta.certificate().pass());
  REQUIRE(eta.normalization().has_value());
  CHECK(*eta.normalization() > 0.0);
  CHECK(std::isfinite(*eta.normalization()));

  // Constant-curvature manifolds fail the decaying assumption.
  auto hyp = ModelManifold::hyperbolic(3, 1.0);
  CHECK_THROWS_AS(build_eta(hyp, b, 0.1, 1.0, 0.0, 0.0), ParameterError);
}

TEST_CASE("w supersolution weight") {
  auto m = ModelManifold::hyperbolic(3, 1.0);
  auto b = RadialDriftField::none();
  Barrier w = build_w(m, b, 0.75);
  CHECK(w.w_params().sigma_spectral == doctest::Approx(2.0));
  CHECK(w.w_params().a == doctest::Approx(1.0));
  CHECK(w.certificate().pass());

  // Defect of the supersolution form at r = 1: e^{-1} (2 coth 1 - 1.75).
  const double expect = std::exp(-1.0) * (2.0 * coth(1.0) - 1.75);
  CHECK(stationary_defect(w, m, b, 0.75, 1.0) ==
        doctest::Approx(expect).epsilon(1e-12));
  CHECK(expect == doctest::Approx(0.3222879).epsilon(1e-6));

  // lambda outside (0, sigma^2/4).
  CHECK_THROWS_AS(build_w(m, b, 1.5), ParameterError);

  // a below the smaller root: the far-field defect goes negative and the
  // certificate fails.
  Barrier bad = build_w(m, b, 0.75, 0.1);
  CHECK_FALSE(bad.certificate().pass());
  CHECK(bad.certificate().min_relative_defect < 0.0);

  // Margin shrinks monotonically as lambda approaches the vertex value.
  double prev = kInf;
  for (double lam : {0.2, 0.5, 0.8, 0.99}) {
    Barrier wl = build_w(m, b, lam, 1.0);
    const double d = wl.certificate().min_relative_defect;
    CHECK(d < prev);
    CHECK(d >= -1e-12);
    prev = d;
  }
}

TEST_CASE("gaussian supersolution") {
  auto m = ModelManifold::euclidean(3);
  auto b = RadialDriftField::none();
  Barrier g = build_gaussian_super(m, b, 2.0, 0.2, 1.0);
  CHECK(g.gaussian_params().alpha == doctest::Approx(1.3));
  CHECK(g.gaussian_params().C ==
        doctest::Approx(std::pow(0.2, 1.3)).epsilon(1e-12));
  CHECK(g.gaussian_params().t0 == 1.0);
  CHECK(g.certificate().pass());
  CHECK(g.certificate().min_relative_defect >= -1e-12);
  CHECK(g.value(0.0, 0.0) <= 1.0);

  // Parabolic defect is nonnegative well off the grid too.
  CHECK(parabolic_defect(g, m, b, 2.0, 7.3, 4.2) >= 0.0);

  CHECK_THROWS_AS(build_gaussian_super(m, b, 5.0 / 3.0, 0.2, 1.0),
                  ParameterError);
  CHECK_THROWS_AS(build_gaussian_super(m, b, 2.0, 1.5, 1.0), ParameterError);
  CHECK_THROWS_AS(parabolic_defect(g, m, b, 2.0, 0.0, 1.0), std::domain_error);
}

TEST_CASE("defect form dispatch") {
  auto m = ModelManifold::euclidean(3);
  auto b = RadialDriftField::none();
  Barrier eta = build_eta(m, b, 0.1, 0.6, 0.0, 0.0);
  Barrier g = build_gaussian_super(m, b, 2.0, 0.2, 1.0);
  CHECK_THROWS_AS(stationary_defect(g, m, b, 1.0, 1.0), UsageError);
  CHECK_THROWS_AS(parabolic_defect(eta, m, b, 2.0, 1.0, 0.0), UsageError);

  // Far-field eta defect grows like 4 a^2 r^2 eta.
  const double d10 = stationary_defect(eta, m, b, 0.6, 10.0);
  const double d20 = stationary_defect(eta, m, b, 0.6, 20.0);
  CHECK(d10 > 0.0);
  CHECK(d20 / eta.value(20.0) > d10 / eta.value(10.0));
}

TEST_CASE("drift fields and declared bounds") {
  auto m = ModelManifold::euclidean(3);
  auto inv = RadialDriftField::inverse_r(-1.0);
  CHECK(inv.value(2.0) == doctest::Approx(-0.5));
  CHECK(inv.d1(2.0) == doctest::Approx(0.25));
  // div(nu/r d/dr) = nu (n-2) / r^2 on R^3.
  CHECK(inv.divergence(2.0, m) == doctest::Approx(-0.25).epsilon(1e-12));
  CHECK(inv.r_times_value_limit() == -1.0);
  auto rows = inv.verify_declared_bounds(m, 1e-3, 50.0, 256);
  for (const auto& r : rows) CHECK(r.pass);

  auto c = RadialDriftField::constant_radial(-0.5);
  CHECK(c.value(7.0) == -0.5);
  CHECK(c.divergence(1.0, m) == doctest::Approx(-1.0));

  Eigen::ArrayXd rt(4), bt(4);
  rt << 0.5, 1.0, 2.0, 4.0;
  bt << 0.0, -0.2, -0.1, 0.0;
  auto s = RadialDriftField::sampled(rt, bt);
  CHECK(s.value(1.0) == doctest::Approx(-0.2));
  CHECK(s.value(0.1) == doctest::Approx(0.0));  // clamped below the table
  s.bounds.b0 = -0.25;
  auto rows2 = s.verify_declared_bounds(m, 0.1, 10.0, 256);
  REQUIRE(rows2.size() == 1);
  CHECK(rows2[0].pass);

  // A declared bound the field violates is caught.
  auto bad = RadialDriftField::constant_radial(-0.5);
  bad.bounds.b0 = 0.0;
  auto rows3 = bad.verify_declared_bounds(m, 1e-3, 50.0, 256);
  bool found_fail = false;
  for (const auto& r : rows3)
    if (r.constraint == "drift_lower_bound") found_fail = !r.pass;
  CHECK(found_fail);
}

TEST_CASE("certificates survive far-field weight underflow") {
  // On a wide defect grid the gaussian-in-r weights underflow to zero well
  // inside the grid; those points are vacuous, not violations.
  auto m = ModelManifold::euclidean(3);
  auto b = RadialDriftField::none();
  DefectGrid wide;
  wide.r_max = 150.0;
  Barrier eta = build_eta(m, b, 0.1, 0.6, 0.0, 0.0, wide);
  CHECK(eta.value(150.0) == 0.0);  // underflow indeed occurs on this grid
  CHECK(eta.certificate().pass());
  CHECK(eta.certificate().min_relative_defect >= -1e-12);
  CHECK(std::isfinite(eta.certificate().min_relative_defect));
}

TEST_CASE("eta weight with an inward inverse-radius drift") {
  auto m = ModelManifold::euclidean(3);
  auto d = RadialDriftField::inverse_r(-0.5);
  // sigma = 0.5 in the drift role b >= -sigma/r; minimal lambda becomes
  // 2 a [1 + C1 (n-1) + sigma] = 0.7 for a = 0.1.
  CHECK_THROWS_AS(build_eta(m, d, 0.1, 0.65, 0.0, 0.5), ParameterError);
  Barrier eta = build_eta(m, d, 0.1, 0.7, 0.0, 0.5);
  CHECK(eta.certificate().pass());
  CHECK(eta.certificate().min_relative_defect >= -1e-12);
  REQUIRE(eta.normalization().has_value());
  CHECK(*eta.normalization() ==
        doctest::Approx(std::pow(0.1 / kPi, 1.5)).epsilon(1e-9));
}

TEST_CASE("w supersolution carried by positive drift on decaying curvature") {
  // Flat-at-infinity geometry: h1 = 0, so the spectral sigma comes entirely
  // from the drift bound b1 > 0.
  auto m = ModelManifold::ricci_decay(3, 2.0);
  auto d = RadialDriftField::constant_radial(0.5);
  CHECK_THROWS_AS(build_w(m, d, 0.1), ParameterError);  // above sigma^2/4
  Barrier w = build_w(m, d, 0.05);
  CHECK(w.w_params().sigma_spectral == doctest::Approx(0.5));
  CHECK(w.w_params().h1 == 0.0);
  CHECK(w.w_params().a == doctest::Approx(0.25));
  CHECK(w.certificate().pass());
  CHECK(w.certificate().min_relative_defect >= -1e-12);
}

TEST_CASE("gaussian supersolution with inward inverse-radius drift") {
  auto m = ModelManifold::euclidean(4);
  auto d = RadialDriftField::inverse_r(-1.0);
  // n + nu = 3: p must exceed 5/3.
  CHECK_THROWS_AS(build_gaussian_super(m, d, 5.0 / 3.0, 0.1, 1.0),
                  ParameterError);
  Barrier g = build_gaussian_super(m, d, 2.0, 0.2, 1.0);
  CHECK(g.gaussian_params().alpha == doctest::Approx(1.3));
  CHECK(g.certificate().pass());
}
