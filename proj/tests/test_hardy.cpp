#include <doctest.h>

#include <cmath>
#include <random>

#include "absentia/hardy.hpp"

using namespace absentia;

namespace {
const double kJ01 = 2.404825557695773;
}

TEST_CASE("circle eigenvalue") {
  SUBCASE("constant flux density") {
    CHECK(circle_eigenvalue(AngularFluxDensity(0.3), 64) ==
          doctest::Approx(0.09).epsilon(1e-9));
    CHECK(circle_eigenvalue(AngularFluxDensity(0.0), 64) ==
          doctest::Approx(0.0).scale(1.0));
  }
  SUBCASE("oscillating density is gauge equivalent to its mean") {
    CHECK(circle_eigenvalue(AngularFluxDensity(0.3, {0.2}, {}), 256) ==
          doctest::Approx(0.09).epsilon(1e-6));
  }
  SUBCASE("flux periodicity and reflection symmetry") {
    const double e0 = circle_eigenvalue(AngularFluxDensity(0.37, {0.1}, {0.05}), 128);
    const double e1 = circle_eigenvalue(AngularFluxDensity(1.37, {0.1}, {0.05}), 128);
    const double e2 = circle_eigenvalue(AngularFluxDensity(-0.37, {-0.1}, {-0.05}), 128);
    CHECK(e0 == doctest::Approx(e1).epsilon(1e-9));
    CHECK(e0 == doctest::Approx(e2).epsilon(1e-9));
  }
  SUBCASE("small mode counts are rejected") {
    CHECK_THROWS(circle_eigenvalue(AngularFluxDensity(0.3), 8));
  }
}

TEST_CASE("HP disk probe") {
  HardyOptions opts;
  const PolarGrid g1(0.0, 1.0, 128, 16, 2.0);
  const HardyProbeResult p1 = hp_disk_probe(1.0, g1, opts);
  REQUIRE_FALSE(p1.skipped);
  CHECK(p1.reference_bound == doctest::Approx(0.25));
  // substitution s = sqrt(r) maps the quotient to the disk eigenvalue
  CHECK(p1.computed_constant == doctest::Approx(kJ01 * kJ01 / 4).epsilon(0.02));
  CHECK(p1.satisfied);

  SUBCASE("scaling: constant(4R) = constant(R)/4") {
    const PolarGrid g4(0.0, 4.0, 128, 16, 2.0);
    const HardyProbeResult p4 = hp_disk_probe(4.0, g4, opts);
    CHECK(p4.reference_bound == doctest::Approx(1.0 / 16));
    CHECK(p4.computed_constant ==
          doctest::Approx(p1.computed_constant / 4.0).epsilon(1e-6));
  }
  SUBCASE("random admissible functions sit above the bound") {
    const HermitianForm h =
        assemble_dirichlet_form(VectorPotentialField::zero(), g1);
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 100; ++t) {
      GridFunction psi(g1);
      for (int i : g1.interior_nodes()) psi[i] = cplx(u(rng), u(rng));
      const double denom =
          integrate(g1, [](const Point& p) { return 1.0 / p.r; }, psi);
      CHECK(h.value(psi) / denom >= 0.25);
    }
  }
}

TEST_CASE("weighted classical Hardy") {
  SUBCASE("d = 2 grid probe sits above 1/4 and tightens with r_max") {
    HardyOptions opts;
    const PolarGrid g20(0.0, 20.0, 128, 16, 2.0);
    const HardyProbeResult p20 = weighted_classical_probe(2, &g20, opts);
    CHECK(p20.reference_bound == doctest::Approx(0.25));
    CHECK(p20.computed_constant >= 0.25 * (1 - opts.tol_mesh));
    CHECK(p20.satisfied);
    const PolarGrid g40(0.0, 40.0, 181, 16, 2.0);
    const HardyProbeResult p40 = weighted_classical_probe(2, &g40, opts);
    CHECK(p40.computed_constant <= p20.computed_constant + 1e-9);
    CHECK(p40.computed_constant >= 0.25 * (1 - opts.tol_mesh));
  }
  SUBCASE("other dimensions are arithmetic references") {
    CHECK(weighted_classical_probe(3, nullptr).reference_bound ==
          doctest::Approx(1.0));
    CHECK(weighted_classical_probe(1, nullptr).reference_bound ==
          doctest::Approx(0.0));
  }
}

TEST_CASE("AB probe") {
  HardyOptions opts;
  SUBCASE("reference bounds are beta^2") {
    const PolarGrid g(20e-3, 20.0, 64, 16, 2.0);
    const HardyProbeResult p = ab_probe(AngularFluxDensity(0.3), g, opts);
    CHECK(p.reference_bound == doctest::Approx(0.09));
    CHECK(p.computed_constant >= 0.09 * (1 - opts.tol_mesh));
  }
  SUBCASE("integer flux is rejected") {
    const PolarGrid g(20e-3, 20.0, 16, 8, 2.0);
    CHECK_THROWS_AS(ab_probe(AngularFluxDensity(2.0), g, opts),
                    std::invalid_argument);
  }
}

TEST_CASE("weighted AB probe") {
  HardyOptions opts;
  const PolarGrid g(20e-3, 20.0, 96, 32, 2.0);
  SUBCASE("alpha = 0.5: reference 1/2") {
    const HardyProbeResult p = ab_weighted_probe(AngularFluxDensity(0.5), g, opts);
    CHECK(p.reference_bound == doctest::Approx(0.5));
    CHECK(p.computed_constant >= 0.5 * (1 - opts.tol_mesh));
    CHECK(p.satisfied);
  }
  SUBCASE("alpha = 0.25: reference 0.3125") {
    const HardyProbeResult p =
        ab_weighted_probe(AngularFluxDensity(0.25), g, opts);
    CHECK(p.reference_bound == doctest::Approx(0.25 + 0.0625));
    CHECK(p.computed_constant >= p.reference_bound * (1 - opts.tol_mesh));
  }
  SUBCASE("integer flux reduces to the weighted classical bound") {
    const HardyProbeResult p = ab_weighted_probe(AngularFluxDensity(1.0), g, opts);
    CHECK(p.reference_bound == doctest::Approx(0.25));
  }
}

TEST_CASE("LW probe") {
  HardyOptions opts;
  SUBCASE("zero field is skipped with a notice") {
    const PolarGrid g(0.0, 10.0, 32, 8, 2.0);
    const HardyProbeResult p = lw_probe(RadialFieldProfile::zero(), g, opts);
    CHECK(p.skipped);
    CHECK(p.note.find("vanishes") != std::string::npos);
  }
  SUBCASE("step field satisfies the bound") {
    const PolarGrid g(0.0, 20.0, 96, 32, 2.0);
    const HardyProbeResult p =
        lw_probe(RadialFieldProfile::step(1.0, 0.25), g, opts);
    REQUIRE_FALSE(p.skipped);
    CHECK(p.reference_bound == doctest::Approx(1.0));
    CHECK(p.computed_constant >= 1.0 - opts.tol_mesh);
    CHECK(p.satisfied);
  }
  SUBCASE("half-flux step field approaches the bound from above as r_max grows") {
    // total flux 1/2: B = 1 on r <= sqrt(2)... use B0 r0^2/2 = 1/2
    const RadialFieldProfile b = RadialFieldProfile::step(4.0, 0.5);
    const PolarGrid g10(0.0, 10.0, 96, 32, 2.0);
    const PolarGrid g20(0.0, 20.0, 136, 32, 2.0);
    const HardyProbeResult p10 = lw_probe(b, g10, opts);
    const HardyProbeResult p20 = lw_probe(b, g20, opts);
    CHECK(p10.computed_constant >= 1.0 - opts.tol_mesh);
    CHECK(p20.computed_constant >= 1.0 - opts.tol_mesh);
    CHECK(p20.computed_constant < p10.computed_constant);  // toward 1
  }
}

TEST_CASE("CK probes") {
  HardyOptions opts;
  SUBCASE("free laplacian is critical: plain-weight constant decays >= 1.5x") {
    auto c = [&](double r_max, int n_r) {
      const PolarGrid g(0.0, r_max, n_r, 16, 1.5);
      return ck_probe(RadialFieldProfile::zero(), g, CkWeight::plain_weight, opts)
          .computed_constant;
    };
    const double c5 = c(5, 128), c10 = c(10, 128), c20 = c(20, 128);
    CHECK(c5 / c10 >= 1.5);
    CHECK(c10 / c20 >= 1.5);
    CHECK(c20 > 0.0);
  }
  SUBCASE("log weight also probes positive") {
    const PolarGrid g(0.0, 10.0, 64, 16, 1.5);
    const HardyProbeResult p =
        ck_probe(RadialFieldProfile::step(1.0, 0.25), g, CkWeight::log_weight, opts);
    CHECK(p.computed_constant > 0.0);
    CHECK(p.satisfied);  // positivity probe
  }
}
