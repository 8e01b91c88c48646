#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "absentia/eigensolve.hpp"

using namespace absentia;

namespace {

// dense brute-force oracle for the generalized Hermitian pencil; kept
// independent of the iterative path it checks
std::vector<double> dense_pencil_eigs(const Eigen::MatrixXcd& h,
                                      const Eigen::MatrixXcd& m) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, m);
  std::vector<double> out(es.eigenvalues().data(),
                          es.eigenvalues().data() + es.eigenvalues().size());
  return out;
}

SpMat to_sparse(const Eigen::MatrixXcd& d) {
  SpMat s = d.sparseView();
  s.makeCompressed();
  return s;
}

Eigen::MatrixXcd random_hpd(int n, std::uint64_t seed, double shift = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXcd b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b(i, j) = cplx(u(rng), u(rng));
  return b * b.adjoint() + shift * Eigen::MatrixXcd::Identity(n, n);
}

const double kJ01 = 2.404825557695773;  // first zero of J_0

}  // namespace

TEST_CASE("dirichlet disk laplacian ground state approaches j01^2") {
  const PolarGrid g(0.0, 1.0, 128, 128, 1.0);
  const HermitianForm h = assemble_dirichlet_form(VectorPotentialField::zero(), g);
  const WeightMass m = lumped_mass(g);
  SolveOptions opts;
  opts.k = 1;
  const SpectralResult r = smallest_eigs(h, &m, opts);
  REQUIRE(r.converged);
  CHECK(r.eigenvalues[0] == doctest::Approx(kJ01 * kJ01).epsilon(0.01));
  CHECK(r.residual_norms[0] <= opts.tol);
}

TEST_CASE("constant field: lowest Landau level within 2%") {
  // link phases need enough angular resolution: Phi(r_max) dtheta stays
  // below pi/2 with n_theta = 128 at r_max = 10
  const PolarGrid g(0.0, 10.0, 160, 128, 1.0);
  const HermitianForm h = assemble_dirichlet_form(
      transverse_gauge(RadialFieldProfile::constant(1.0)), g);
  const WeightMass m = lumped_mass(g);
  SolveOptions opts;
  opts.k = 3;
  const SpectralResult r = smallest_eigs(h, &m, opts);
  REQUIRE(r.converged);
  // the level is degenerate; the first few eigenvalues all sit at b = 1
  for (int i = 0; i < 3; ++i)
    CHECK(r.eigenvalues[i] == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("deep well binds a genuine negative state") {
  auto lam1 = [&](double r_max, int n_r) {
    const PolarGrid g(0.0, r_max, n_r, 16, 2.0);
    const HermitianForm dir =
        assemble_dirichlet_form(VectorPotentialField::zero(), g);
    const WeightMass v = assemble_weight(
        [](const Point& p) { return p.r <= 1.0 ? -4.0 : 0.0; }, g);
    const HermitianForm h = hamiltonian_form(dir, v);
    const WeightMass m = lumped_mass(g);
    SolveOptions opts;
    const SpectralResult r = smallest_eigs(h, &m, opts);
    REQUIRE(r.converged);
    return r.eigenvalues[0];
  };
  const double l20 = lam1(20, 181), l40 = lam1(40, 256);
  CHECK(l20 < -1.0);
  CHECK(std::abs(l40 - l20) < 1e-3 * (1.0 + std::abs(l40)));
}

TEST_CASE("min-max sanity: lambda_1 below random Rayleigh quotients") {
  const PolarGrid g(0.0, 4.0, 32, 16, 1.0);
  const HermitianForm h = assemble_dirichlet_form(VectorPotentialField::zero(), g);
  const WeightMass m = lumped_mass(g);
  SolveOptions opts;
  const SpectralResult r = smallest_eigs(h, &m, opts);
  REQUIRE(r.converged);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 10; ++t) {
    GridFunction psi(g);
    for (int i : g.interior_nodes()) psi[i] = cplx(u(rng), u(rng));
    const double quot = h.value(psi) / m.apply(psi);
    CHECK(r.eigenvalues[0] <= quot + 1e-10);
  }
}

TEST_CASE("eigenvectors are M-orthonormal and eigenvalues ascend") {
  const PolarGrid g(0.0, 1.0, 48, 16, 1.0);
  const HermitianForm h = assemble_dirichlet_form(VectorPotentialField::zero(), g);
  const WeightMass m = lumped_mass(g);
  SolveOptions opts;
  opts.k = 4;
  const SpectralResult r = smallest_eigs(h, &m, opts);
  REQUIRE(r.converged);
  for (std::size_t i = 1; i < r.eigenvalues.size(); ++i)
    CHECK(r.eigenvalues[i] >= r.eigenvalues[i - 1]);
  for (std::size_t i = 0; i < r.eigenvectors.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      cplx ip = 0.0;
      for (int idx = 0; idx < g.n_nodes(); ++idx)
        ip += std::conj(r.eigenvectors[i][idx]) * r.eigenvectors[j][idx] *
              m.diagonal()[idx];
      CHECK(std::abs(ip - (i == j ? 1.0 : 0.0)) < 1e-8);
    }
}

TEST_CASE("determinism: identical seeds give identical runs") {
  const PolarGrid g(0.0, 2.0, 32, 16, 1.0);
  const HermitianForm h = assemble_dirichlet_form(
      transverse_gauge(RadialFieldProfile::step(1.0, 0.5)), g);
  const WeightMass m = lumped_mass(g);
  SolveOptions opts;
  opts.k = 2;
  const SpectralResult r1 = smallest_eigs(h, &m, opts);
  const SpectralResult r2 = smallest_eigs(h, &m, opts);
  CHECK(r1.iterations == r2.iterations);
  for (std::size_t i = 0; i < r1.eigenvalues.size(); ++i)
    CHECK(r1.eigenvalues[i] == r2.eigenvalues[i]);  // bit identical
}

TEST_CASE("smallest_eigs matches the dense oracle on small pencils") {
  const int n = 40;
  const Eigen::MatrixXcd hd = random_hpd(n, 3, 0.5);
  Eigen::VectorXd md(n);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  for (int i = 0; i < n; ++i) md[i] = u(rng);
  SolveOptions opts;
  opts.k = 3;
  const PencilEigenResult r =
      smallest_eigs_pencil(to_sparse(hd), md, opts);
  REQUIRE(r.converged);
  const std::vector<double> exact =
      dense_pencil_eigs(hd, md.asDiagonal().toDenseMatrix().cast<cplx>());
  for (int i = 0; i < 3; ++i)
    CHECK(r.eigenvalues[i] == doctest::Approx(exact[i]).epsilon(1e-9));
}

TEST_CASE("sup_rayleigh") {
  SUBCASE("unit weight against the disk laplacian gives 1/lambda_1") {
    const PolarGrid g(0.0, 1.0, 96, 32, 1.0);
    const HermitianForm h =
        assemble_dirichlet_form(VectorPotentialField::zero(), g);
    const WeightMass w = lumped_mass(g);
    SolveOptions opts;
    const SubordinationConstant c = sup_rayleigh(w, h, opts);
    CHECK(c.converged);
    CHECK(c.value == doctest::Approx(1.0 / (kJ01 * kJ01)).epsilon(0.01));
    CHECK(c.b_value == doctest::Approx(std::sqrt(c.value)));
  }
  SUBCASE("zero weight gives zero") {
    const PolarGrid g(0.0, 1.0, 16, 8);
    const HermitianForm h =
        assemble_dirichlet_form(VectorPotentialField::zero(), g);
    const WeightMass w = assemble_weight([](const Point&) { return 0.0; }, g);
    const SubordinationConstant c = sup_rayleigh(w, h, SolveOptions{});
    CHECK(c.value == 0.0);
    CHECK(c.converged);
  }
  SUBCASE("negative weights are rejected") {
    const PolarGrid g(0.0, 1.0, 16, 8);
    const HermitianForm h =
        assemble_dirichlet_form(VectorPotentialField::zero(), g);
    const WeightMass w = assemble_weight(
        [](const Point& p) { return p.r - 0.5; }, g);
    CHECK_THROWS_AS(sup_rayleigh(w, h, SolveOptions{}), std::invalid_argument);
  }
  SUBCASE("5x5 diagonal weight against a random HPD form") {
    Eigen::VectorXd w(5);
    w << 0.3, 0.0, 2.0, 1.1, 0.7;
    const Eigen::MatrixXcd kd = random_hpd(5, 9);
    const SubordinationConstant c =
        sup_rayleigh_pencil(w, to_sparse(kd), SolveOptions{});
    REQUIRE(c.converged);
    const std::vector<double> exact = dense_pencil_eigs(
        Eigen::MatrixXd(w.asDiagonal()).cast<cplx>(), kd);
    CHECK(c.value == doctest::Approx(exact.back()).epsilon(1e-10));
  }
  SUBCASE("dense oracle agreement on random pencils up to dimension 200") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 8; ++trial) {
      const int n = 20 + static_cast<int>(rng() % 181);
      Eigen::VectorXd w(n);
      std::uniform_real_distribution<double> u(0.0, 1.0);
      for (int i = 0; i < n; ++i) w[i] = u(rng) < 0.2 ? 0.0 : u(rng);
      const Eigen::MatrixXcd kd = random_hpd(n, 1000 + trial);
      const SubordinationConstant c =
          sup_rayleigh_pencil(w, to_sparse(kd), SolveOptions{});
      REQUIRE(c.converged);
      const std::vector<double> exact = dense_pencil_eigs(
          Eigen::MatrixXd(w.asDiagonal()).cast<cplx>(), kd);
      CHECK(std::abs(c.value - exact.back()) <=
            1e-8 * std::max(1.0, exact.back()));
    }
  }
}

TEST_CASE("stabilization probe") {
  SUBCASE("needs at least three increasing radii") {
    CHECK_THROWS(stabilization_probe([](double) { return RadiusSample{}; },
                                     {5.0, 10.0}));
  }
  SUBCASE("free disk ground state is an artifact") {
    auto solve_at = [&](double r_max) {
      const int n_r = static_cast<int>(std::lround(48 * std::sqrt(r_max / 5.0)));
      const PolarGrid g(0.0, r_max, n_r, 16, 2.0);
      const HermitianForm h =
          assemble_dirichlet_form(VectorPotentialField::zero(), g);
      const WeightMass m = lumped_mass(g);
      SolveOptions opts;
      const SpectralResult r = smallest_eigs(h, &m, opts);
      RadiusSample s;
      s.r_max = r_max;
      s.converged = r.converged;
      s.lambda1 = r.eigenvalues[0];
      s.residual = r.residual_norms[0];
      s.participation_radius = participation_radius(r.eigenvectors[0]);
      return s;
    };
    const StabilizationResult st = stabilization_probe(solve_at, {5, 10, 20});
    CHECK(st.verdict == StabilizationVerdict::artifact);
    // lambda_1 about j01^2 / r_max^2: shrinks by about 4x per doubling
    CHECK(st.samples[0].lambda1 / st.samples[1].lambda1 ==
          doctest::Approx(4.0).epsilon(0.1));
  }
  SUBCASE("deep well is genuine") {
    auto solve_at = [&](double r_max) {
      const int n_r = static_cast<int>(std::lround(96 * std::sqrt(r_max / 10.0)));
      const PolarGrid g(0.0, r_max, n_r, 16, 2.0);
      const HermitianForm dir =
          assemble_dirichlet_form(VectorPotentialField::zero(), g);
      const WeightMass v = assemble_weight(
          [](const Point& p) { return p.r <= 1.0 ? -4.0 : 0.0; }, g);
      const HermitianForm h = hamiltonian_form(dir, v);
      const WeightMass m = lumped_mass(g);
      SolveOptions opts;
      const SpectralResult r = smallest_eigs(h, &m, opts);
      RadiusSample s;
      s.r_max = r_max;
      s.converged = r.converged;
      s.lambda1 = r.eigenvalues[0];
      s.participation_radius = participation_radius(r.eigenvectors[0]);
      return s;
    };
    const StabilizationResult st = stabilization_probe(solve_at, {10, 20, 40});
    CHECK(st.verdict == StabilizationVerdict::genuine);
    CHECK(st.samples.back().lambda1 < -1.0);
    CHECK(st.samples.back().participation_radius < 5.0);
  }
}
