#include <doctest.h>

#include <cmath>
#include <random>

#include "absentia/fields.hpp"

using namespace absentia;

TEST_CASE("flux of the zero field") {
  const FluxFunction phi = flux_profile(RadialFieldProfile::zero());
  CHECK(phi(0.0) == 0.0);
  CHECK(phi(3.7) == 0.0);
  CHECK(phi.total_flux().value() == 0.0);
}

TEST_CASE("flux of the step field is exact piecewise") {
  // B = 1 on r <= 0.25: Phi = r^2/2 inside, 1/32 outside
  const FluxFunction phi = flux_profile(RadialFieldProfile::step(1.0, 0.25));
  CHECK(phi(0.1) == doctest::Approx(0.005).epsilon(1e-14));
  CHECK(phi(0.25) == doctest::Approx(1.0 / 32).epsilon(1e-14));
  CHECK(phi(5.0) == doctest::Approx(1.0 / 32).epsilon(1e-14));
  CHECK(phi.total_flux().value() == doctest::Approx(1.0 / 32));
  CHECK(phi.derivative(0.1) == doctest::Approx(0.1));
  CHECK(phi.derivative(0.5) == 0.0);
}

TEST_CASE("gaussian_poly flux approximates (1 - exp(-r^2))/2") {
  const RadialFieldProfile b = RadialFieldProfile::gaussian_poly(1.0, 1.0);
  // the interpolation tolerance bounds the flux error through int |B - g| s ds
  double approx_tol = 0.0;
  for (int i = 0; i <= 4000; ++i) {
    const double r = 5.0 * i / 4000.0;
    approx_tol = std::max(approx_tol, std::abs(b(r) - std::exp(-r * r)));
  }
  CHECK(approx_tol < 1e-4);
  const FluxFunction phi = flux_profile(b);
  for (double r : {0.3, 0.9, 1.7, 3.0, 4.9}) {
    const double exact = 0.5 * (1.0 - std::exp(-r * r));
    CHECK(std::abs(phi(r) - exact) <= approx_tol * r * r / 2 + 1e-12);
  }
}

TEST_CASE("flux is monotone where B has one sign and matches its derivative") {
  const RadialFieldProfile b = RadialFieldProfile::step(2.0, 0.5);
  const FluxFunction phi = flux_profile(b);
  double prev = 0.0;
  for (int i = 1; i <= 100; ++i) {
    const double r = 0.5 * i / 100;
    CHECK(phi(r) >= prev);
    prev = phi(r);
    // analytic differentiation of the piecewise antiderivative
    CHECK(phi.derivative(r) == doctest::Approx(r * b(r)).epsilon(1e-14));
  }
}

TEST_CASE("profile validation") {
  CHECK_THROWS(RadialFieldProfile({PolyPiece{0.5, 1.0, {1.0}}}));  // gap at 0
  CHECK_THROWS(RadialFieldProfile(
      {PolyPiece{0.0, 1.0, {std::numeric_limits<double>::infinity()}}}));
}

TEST_CASE("transverse gauge reproduces the declared field and flux") {
  SUBCASE("zero field") {
    const VectorPotentialField a = VectorPotentialField::zero();
    CHECK(a(0.3, -0.8).norm() == 0.0);
  }
  SUBCASE("step field magnitudes") {
    const VectorPotentialField a =
        transverse_gauge(RadialFieldProfile::step(1.0, 0.25));
    // |A| = r/2 inside, r0^2/(2r) outside
    CHECK(a(0.1, 0.0).norm() == doctest::Approx(0.05).epsilon(1e-13));
    CHECK(a(0.0, 2.0).norm() == doctest::Approx(0.25 * 0.25 / 4.0).epsilon(1e-13));
    CHECK_FALSE(a.origin_singular());
  }
  SUBCASE("constant field is the symmetric gauge") {
    const VectorPotentialField a =
        transverse_gauge(RadialFieldProfile::constant(0.7));
    const Eigen::Vector2d v = a(1.3, -0.4);
    CHECK(v[0] == doctest::Approx(0.7 * 0.4 / 2).epsilon(1e-13));
    CHECK(v[1] == doctest::Approx(0.7 * 1.3 / 2).epsilon(1e-13));
  }
  SUBCASE("analytic curl identity 2f + r f' = B at piece interiors") {
    // f = Phi/r^2; check (Phi'(r) r - 2 Phi)/r^2 ... via finite differences of A
    const RadialFieldProfile b = RadialFieldProfile::step(1.0, 0.25);
    const FluxFunction phi = flux_profile(b);
    for (double r : {0.1, 0.2, 0.4, 1.0}) {
      const double f = phi(r) / (r * r);
      const double h = 1e-6 * r;
      const double fp =
          (phi(r + h) / ((r + h) * (r + h)) - phi(r - h) / ((r - h) * (r - h))) /
          (2 * h);
      CHECK(2 * f + r * fp == doctest::Approx(b(r)).epsilon(1e-6));
    }
  }
}

TEST_CASE("transverse potentials are tangential at sampled points") {
  const VectorPotentialField a =
      transverse_gauge(RadialFieldProfile::gaussian_poly(1.0, 0.8));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    const double x = u(rng), y = u(rng);
    const Eigen::Vector2d v = a(x, y);
    CHECK(std::abs(x * v[0] + y * v[1]) <= 1e-14 * (1.0 + v.norm()));
  }
}

TEST_CASE("AB potential") {
  SUBCASE("zero alpha vanishes away from the origin") {
    const VectorPotentialField a = ab_potential(AngularFluxDensity(0.0));
    CHECK(a(1.0, 1.0).norm() == 0.0);
  }
  SUBCASE("direct substitution at theta = 0, r = 1") {
    const VectorPotentialField a = ab_potential(AngularFluxDensity(0.5));
    const Eigen::Vector2d v = a(1.0, 0.0);
    CHECK(v[0] == doctest::Approx(0.0));
    CHECK(v[1] == doctest::Approx(0.5));
    CHECK(a.origin_singular());
    CHECK_THROWS_AS(a(0.0, 0.0), std::domain_error);
  }
  SUBCASE("integer flux can be gauged out") {
    const VectorPotentialField a = ab_potential(AngularFluxDensity(1.0));
    CHECK(a.gauge_trivial());
    CHECK(AngularFluxDensity(1.0).flux_distance() == 0.0);
  }
  SUBCASE("tangential at sampled points") {
    const VectorPotentialField a =
        ab_potential(AngularFluxDensity(0.3, {0.2}, {0.1}));
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 100; ++i) {
      const double x = u(rng), y = u(rng);
      if (x * x + y * y < 1e-4) continue;
      const Eigen::Vector2d v = a(x, y);
      CHECK(std::abs(x * v[0] + y * v[1]) <= 1e-13 * (1.0 + v.norm()));
    }
  }
}

TEST_CASE("angular flux density series and exact integrals") {
  const AngularFluxDensity al(0.3, {0.2}, {0.0});
  CHECK(al(0.0) == doctest::Approx(0.5));
  CHECK(al.mean_flux() == doctest::Approx(0.3));
  CHECK(al.integral(0.0, 2 * M_PI) == doctest::Approx(0.6 * M_PI));
  // antiderivative of cos is sin
  CHECK(al.integral(0.0, M_PI / 2) ==
        doctest::Approx(0.3 * M_PI / 2 + 0.2 * 1.0));
}

TEST_CASE("flux_distance examples and sweep") {
  CHECK(flux_distance(0.5) == doctest::Approx(0.5));
  CHECK(flux_distance(1.0) == doctest::Approx(0.0));
  CHECK(flux_distance(2.7) == doctest::Approx(0.3));
  // dist(n + t, Z) = min(t, 1 - t) for every integer n
  for (int n : {-3, 0, 7})
    for (int i = 0; i <= 50; ++i) {
      const double t = i / 50.0;
      CHECK(flux_distance(n + t) ==
            doctest::Approx(std::min(t, 1.0 - t)).epsilon(1e-12));
    }
}

TEST_CASE("potential model reconstruction and derived weights") {
  // V1 smooth long-range, V2 compact bump
  RadialFn v1 = [](double r) { return -1.0 / (1.0 + r * r); };
  RadialFn v2 = [](double r) { return r < 1.0 ? 0.5 : 0.0; };
  RadialFn im = [](double r) { return r < 2.0 ? 0.01 : 0.0; };
  const PotentialModel v(v1, v2, im);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int i = 0; i < 100000; ++i) {
    const double r = u(rng);
    const double re = v.re(r);
    CHECK(re == v1(r) + v2(r));
    CHECK(v.re_plus(r) - v.re_minus(r) == doctest::Approx(re).epsilon(1e-15));
    CHECK(v.re_plus(r) >= 0.0);
    CHECK(v.re_minus(r) >= 0.0);
    CHECK(v.re_plus(r) * v.re_minus(r) == 0.0);  // disjoint supports
  }

  // central-difference d/dr(r V1) against the analytic value
  for (double r : {0.5, 1.5, 4.0}) {
    const double analytic =
        v1(r) + r * (2.0 * r / ((1.0 + r * r) * (1.0 + r * r)));
    CHECK(v.dr_rv1(r) == doctest::Approx(analytic).epsilon(1e-7));
  }
  CHECK_FALSE(v.dr_rv1_analytic());

  CHECK(v.w_4r2_imsq(1.0) == doctest::Approx(4.0 * 1e-4));
  CHECK(v.w_4r2_im(1.0) == doctest::Approx(0.04));
  CHECK(v.w_abs_v2(0.5) == doctest::Approx(0.5));
  CHECK(v.w_4r2_v2sq(0.5) == doctest::Approx(4 * 0.25 * 0.25));
}

TEST_CASE("well potential routes the jump to V2 by default") {
  const PotentialModel v = well_potential(0.5, 1.0);
  CHECK(v.v2(0.5) == doctest::Approx(-0.5));
  CHECK(v.v1(0.5) == 0.0);
  CHECK(v.re_minus(0.5) == doctest::Approx(0.5));
  CHECK(v.re(2.0) == 0.0);
}
