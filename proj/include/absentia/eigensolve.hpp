#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "absentia/forms.hpp"

namespace absentia {

struct SolveOptions {
  double tol = 1e-8;
  int max_iter = 5000;
  std::uint64_t seed = 42;
  int k = 1;
};

/// Matrix-level result for the pencil (H, M) with M a positive diagonal.
struct PencilEigenResult {
  std::vector<double> eigenvalues;              // ascending
  std::vector<Eigen::VectorXcd> eigenvectors;   // M-orthonormal
  std::vector<double> residual_norms;           // ||Hv - lam Mv|| / ||v||
  int iterations = 0;
  bool converged = false;
  std::vector<double> shift_history;
};

/// k smallest eigenpairs of H v = lambda M v by shift-invert Lanczos with a
/// deterministic seeded start. The shift is placed below a Gershgorin lower
/// bound so the factored matrix is definite; eigenpairs are found one at a
/// time with deflation, which resolves multiplicities.
PencilEigenResult smallest_eigs_pencil(const SpMat& h, const Eigen::VectorXd& m,
                                       const SolveOptions& opts);

/// Optimal constant of int W |psi|^2 <= c int |grad_A psi|^2 plus solver
/// diagnostics. b_value = sqrt(c).
struct SubordinationConstant {
  double value = 0.0;
  double b_value = 0.0;
  int iterations = 0;
  bool converged = true;
  double residual = 0.0;
  std::uint64_t seed = 0;
};

/// Largest eigenvalue of the pencil (W, K): Lanczos on the K^-1-
/// preconditioned operator sqrt(W) K^-1 sqrt(W), which never leaves the
/// support-reachable subspace of W. W must be entrywise >= 0, K positive
/// definite.
SubordinationConstant sup_rayleigh_pencil(const Eigen::VectorXd& w,
                                          const SpMat& k,
                                          const SolveOptions& opts);

/// Grid-level spectral result; eigenvectors are scattered back to full grid
/// functions with zeros on Dirichlet rings.
struct SpectralResult {
  std::vector<double> eigenvalues;
  std::vector<GridFunction> eigenvectors;
  std::vector<double> residual_norms;
  int iterations = 0;
  bool converged = false;
};

/// k smallest eigenpairs of the form pencil (h, m) after Dirichlet
/// elimination; m == nullptr means the identity pencil.
SpectralResult smallest_eigs(const HermitianForm& h, const WeightMass* m,
                             const SolveOptions& opts);

SubordinationConstant sup_rayleigh(const WeightMass& w, const HermitianForm& k,
                                   const SolveOptions& opts);

/// Smallest level radius containing the given fraction of the quadrature
/// mass of |v|^2.
double participation_radius(const GridFunction& v, double mass_fraction = 0.9);

struct RadiusSample {
  double r_max = 0.0;
  double lambda1 = 0.0;
  double residual = 0.0;
  double participation_radius = 0.0;
  bool converged = false;
};

enum class StabilizationVerdict { genuine, artifact, withheld };

struct StabilizationResult {
  std::vector<RadiusSample> samples;
  StabilizationVerdict verdict = StabilizationVerdict::withheld;
  std::string note;
};

/// Distinguishes truncation artifacts from genuine discrete eigenvalues:
/// genuine iff successive lambda_1 agree within 1e-3 (1+|lambda_1|) and the
/// eigenfunction participation radius stays within r_max/2. Any
/// non-converged solve withholds the verdict.
StabilizationResult stabilization_probe(
    const std::function<RadiusSample(double)>& solve_at_radius,
    const std::vector<double>& radii);

}  // namespace absentia
