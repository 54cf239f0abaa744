#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "heatlab/criteria.hpp"

using namespace heatlab;

TEST_CASE("kaplan threshold") {
  CHECK(kaplan_threshold(1.0, 2.0) == 1.0);
  CHECK(kaplan_threshold(4.0, 3.0) == doctest::Approx(2.0));
  CHECK(kaplan_threshold(0.6, 2.0) == doctest::Approx(0.6));
  CHECK_THROWS_AS(kaplan_threshold(1.0, 1.0), std::domain_error);
}

TEST_CASE("ode blow-up time closed form") {
  CHECK(ode_blowup_time(1.0, 0.0, 2.0) == doctest::Approx(1.0));
  CHECK(ode_blowup_time(2.0, 1.0, 2.0) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(ode_blowup_time(0.5, 1.0, 2.0) == kInf);
  CHECK(ode_blowup_time(1.0, 1.0, 2.0) == kInf);  // exactly at the threshold
  CHECK_THROWS_AS(ode_blowup_time(0.0, 1.0, 2.0), std::domain_error);
}

TEST_CASE("ode blow-up oracle agreement") {
  // Deterministic spot checks plus a small random sweep; the full 100-triple
  // check runs in the acceptance suite.
  CHECK(ode_blowup_time_numeric(1.0, 0.0, 2.0) ==
        doctest::Approx(1.0).epsilon(1e-6));
  CHECK(ode_blowup_time_numeric(2.0, 1.0, 2.0) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-6));

  std::mt19937 rng(0);
  std::uniform_real_distribution<double> up(1.1, 4.0), ul(0.0, 10.0),
      ur(std::log(1.01), std::log(100.0));
  for (int i = 0; i < 10; ++i) {
    const double p = up(rng), lam = ul(rng), ratio = std::exp(ur(rng));
    const double thr = lam > 0 ? std::pow(lam, 1.0 / (p - 1.0)) : 1.0;
    const double m0 = ratio * thr;
    const double closed = ode_blowup_time(m0, lam, p);
    const double numeric = ode_blowup_time_numeric(m0, lam, p);
    CHECK(std::abs(closed - numeric) / closed < 0.005);
  }
}

TEST_CASE("mass test against the eta weight") {
  auto m = ModelManifold::euclidean(3);
  auto b = RadialDriftField::none();
  Barrier eta = build_eta(m, b, 0.1, 0.6, 0.0, 0.0);
  const double thr = kaplan_threshold(0.6, 2.0);

  // u0 = threshold constant: mass equals the threshold up to the truncated
  // tail, so the strict test does not fire.
  auto flat = [&](double) { return thr; };
  KaplanVerdict v = mass_test(flat, eta, m, 0.6, 2.0, 60.0);
  CHECK(v.mass == doctest::Approx(thr).epsilon(1e-9));
  CHECK_FALSE(v.predicts_blowup);

  auto dbl = [&](double) { return 2.0 * thr; };
  KaplanVerdict v2 = mass_test(dbl, eta, m, 0.6, 2.0, 60.0);
  CHECK(v2.mass == doctest::Approx(2.0 * thr).epsilon(1e-9));
  CHECK(v2.predicts_blowup);
  REQUIRE(v2.ode_blowup_time_upper.has_value());
  CHECK(*v2.ode_blowup_time_upper ==
        doctest::Approx(ode_blowup_time(v2.mass, 0.6, 2.0)));

  // Verdict is invariant under rescaling the weight with its normalization.
  auto m_h = ModelManifold::hyperbolic(3, 1.0);
  Barrier phi1 = build_phi(m_h, b, 8.0, 0.0, 1.0, 1.0, 1.0);
  Barrier phi3 = build_phi(m_h, b, 8.0, 0.0, 1.0, 1.0, 3.0);
  auto bump = [](double r) { return 5.0 * std::exp(-r * r); };
  KaplanVerdict a1 = mass_test(bump, phi1, m_h, 8.0, 2.0, 40.0);
  KaplanVerdict a3 = mass_test(bump, phi3, m_h, 8.0, 2.0, 40.0);
  CHECK(a1.mass == doctest::Approx(a3.mass).epsilon(1e-10));
  CHECK(a1.predicts_blowup == a3.predicts_blowup);

  // Crossing amplitude by bisection matches the direct quadrature solve.
  auto mass_of = [&](double A) {
    auto u0 = [&](double r) { return A * std::exp(-r * r); };
    return mass_test(u0, eta, m, 0.6, 2.0, 60.0).mass;
  };
  double lo = 0.0, hi = 64.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mass_of(mid) > thr ? hi : lo) = mid;
  }
  const double unit_mass = mass_of(1.0);  // mass is linear in the amplitude
  CHECK(0.5 * (lo + hi) == doctest::Approx(thr / unit_mass).epsilon(1e-6));

  // Missing normalization is a usage error.
  Barrier w = build_w(m_h, b, 0.75);
  CHECK_THROWS_AS(mass_test(flat, w, m_h, 0.75, 2.0, 40.0), UsageError);
}

TEST_CASE("exponent ranges") {
  ExponentRanges e = exponent_ranges(3, 1.0, 0.0);
  CHECK(e.fujita_nonexistence_upper == 1.0 + 2.0 / 3.0);
  CHECK(e.existence_lower == 1.0 + 2.0 / 3.0);
  CHECK(e.fujita_nonexistence_upper == e.existence_lower);
  CHECK(e.euclidean_consistency);

  CHECK(exponent_ranges(3, 2.0, 0.0).fujita_nonexistence_upper ==
        doctest::Approx(1.4));
  CHECK(exponent_ranges(4, 1.0, -1.0).existence_lower ==
        doctest::Approx(1.0 + 2.0 / 3.0));
  CHECK_THROWS_AS(exponent_ranges(3, 1.0, -3.0), std::domain_error);
}

TEST_CASE("small-a search certifies subcritical blow-up") {
  auto m = ModelManifold::euclidean(3);
  auto b = RadialDriftField::none();
  auto ball = [](double r) { return r < 1.0 ? 1.0 : 0.0; };

  SmallAResult res = find_small_a(ball, m, b, 0.0, 0.0, 1.0, 1.5, 1.0);
  CHECK(res.certified);
  CHECK(res.a > 0.0);
  CHECK(res.a < 0.1);
  CHECK(res.lambda == doctest::Approx(6.0 * res.a));
  CHECK(res.verdict.predicts_blowup);

  // Above the nonexistence range the scaling reverses and the search fails.
  SmallAResult res2 = find_small_a(ball, m, b, 0.0, 0.0, 1.0, 1.8, 1.0);
  CHECK_FALSE(res2.certified);
  CHECK(res2.reason.find("1.8") != std::string::npos);

  auto zero = [](double) { return 0.0; };
  CHECK_THROWS_AS(find_small_a(zero, m, b, 0.0, 0.0, 1.0, 1.5, 1.0),
                  ParameterError);
  CHECK_THROWS_AS(find_small_a(ball, m, b, 0.0, 0.5, 1.0, 1.5, 1.0),
                  ParameterError);
}

TEST_CASE("decay envelope") {
  auto m = ModelManifold::hyperbolic(3, 1.0);
  auto b = RadialDriftField::none();
  Barrier w = build_w(m, b, 0.75);

  Envelope e = make_envelope(0.75, 2.0, 0.375, w);
  CHECK(e.xi(0.0) == doctest::Approx(1.0));
  CHECK(e.value(1.3, 0.0) ==
        doctest::Approx(0.375 * std::exp(-1.3)).epsilon(1e-12));
  // c_tilde = threshold/2 gives xi(inf) = 2.
  CHECK(e.xi_infinity() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(e.xi(1000.0) == doctest::Approx(2.0).epsilon(1e-9));
  // xi is nondecreasing and bounded by its limit.
  double prev = 0.0;
  for (double t = 0.0; t <= 20.0; t += 0.25) {
    CHECK(e.xi(t) >= prev);
    CHECK(e.xi(t) <= e.xi_infinity() * (1 + 1e-12));
    prev = e.xi(t);
  }
  // The center value decays to zero despite the xi growth.
  CHECK(e.value(0.0, 40.0) < 1e-10);

  // Envelope is nonincreasing in r.
  CHECK(e.value(2.0, 1.0) < e.value(1.0, 1.0));

  // Discrete supersolution inequality on a space-time grid.
  double worst = kInf;
  const Eigen::ArrayXd rs = log_spaced(1e-4, 40.0, 128);
  for (int j = 0; j <= 32; ++j) {
    const double t = 10.0 * j / 32.0;
    for (int i = 0; i < rs.size(); ++i)
      worst = std::min(worst, envelope_parabolic_defect(e, m, b, rs[i], t));
  }
  CHECK(worst >= -1e-10);

  // (4.6) is strict.
  CHECK_THROWS_AS(make_envelope(0.75, 2.0, 0.75, w), ParameterError);
  Barrier eta = build_eta(ModelManifold::euclidean(3), b, 0.1, 0.6, 0.0, 0.0);
  CHECK_THROWS_AS(make_envelope(0.6, 2.0, 0.1, eta), UsageError);
}

TEST_CASE("envelope closed form at unit lambda") {
  // sigma^2/4 = 1.44 admits lambda = 1; with c_tilde = 1/2 and p = 2 the
  // xi limit is (1 - 1/2)^{-1} = 2.
  auto m = ModelManifold::hyperbolic(3, 1.2);
  auto b = RadialDriftField::none();
  Barrier w = build_w(m, b, 1.0);
  CHECK(w.certificate().pass());
  Envelope e = make_envelope(1.0, 2.0, 0.5, w);
  CHECK(e.xi(0.0) == doctest::Approx(1.0));
  CHECK(e.xi_infinity() == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(e.value(0.0, 50.0) < 1e-10);
}
