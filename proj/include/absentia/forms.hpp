#pragma once

#include <functional>
#include <iosfwd>
#include <optional>

#include <Eigen/SparseCore>

#include "absentia/mesh.hpp"

namespace absentia {

using SpMat = Eigen::SparseMatrix<cplx>;

/// Diagonal weighted mass, diag_i = quad_i * w(x_i), over all grid nodes.
class WeightMass {
 public:
  WeightMass(const PolarGrid& grid, Eigen::VectorXd diag);

  const PolarGrid& grid() const { return *grid_; }
  const Eigen::VectorXd& diagonal() const { return diag_; }
  bool nonnegative() const { return nonnegative_; }
  /// sum_i diag_i |psi_i|^2
  double apply(const GridFunction& psi) const;
  Eigen::VectorXd reduced(const std::vector<int>& dofs) const;

 private:
  const PolarGrid* grid_;
  Eigen::VectorXd diag_;
  bool nonnegative_;
};

WeightMass assemble_weight(const std::function<double(const Point&)>& w,
                           const PolarGrid& grid,
                           bool require_nonnegative = false);
/// Plain L2 mass (w == 1).
WeightMass lumped_mass(const PolarGrid& grid);

/// Sparse Hermitian quadratic form over all grid nodes. Dirichlet rows and
/// columns stay in the full matrix (so the form can be evaluated on
/// arbitrary nodal data); reduced() eliminates them for eigensolves.
class HermitianForm {
 public:
  HermitianForm(const PolarGrid& grid, SpMat mat, bool positive_semidefinite);

  const PolarGrid& grid() const { return *grid_; }
  int dimension() const { return static_cast<int>(mat_.rows()); }
  const SpMat& matrix() const { return mat_; }
  bool positive_semidefinite() const { return psd_; }

  /// Re(psi^* H psi) over the full node set.
  double value(const GridFunction& psi) const;
  GridFunction apply(const GridFunction& psi) const;
  SpMat reduced(const std::vector<int>& dofs) const;
  void write_matrix_market(std::ostream& os) const;

 private:
  const PolarGrid* grid_;
  SpMat mat_;
  bool psd_;
};

/// Link-variable discretization of int w(r) |grad_A psi|^2. Each edge
/// carries the phase exp(i int_edge A.dl); radial links of the transverse
/// and AB gauges are phase-free and angular links use the exact line
/// integral, so gauge covariance and the discrete diamagnetic inequality are
/// structural. The optional radial_weight multiplies the energy measure
/// (used by the weighted Hardy probes).
HermitianForm assemble_dirichlet_form(
    const VectorPotentialField& a, const PolarGrid& grid,
    const std::function<double(double)>& radial_weight = {});

/// h[psi] = dirichlet[psi] + sum V(x) |psi(x)|^2 quad(x); real V only.
HermitianForm hamiltonian_form(const HermitianForm& dirichlet,
                               const WeightMass& v_mass);

struct DiamagneticCheck {
  double lhs = 0, rhs = 0;
  bool holds = false;
};
/// lhs = dirichlet_A[psi], rhs = dirichlet_0[|psi|];
/// holds iff lhs >= rhs - 1e-12 (1 + lhs).
DiamagneticCheck diamagnetic_check(const HermitianForm& dirichlet_a,
                                   const HermitianForm& dirichlet_0,
                                   const GridFunction& psi);

struct LowerBoundCheck {
  double lhs = 0, rhs = 0;
  bool holds = false;
};
/// Verifies dirichlet_A[psi] >= sum (sign B) |psi|^2 for sign = +1 or -1.
LowerBoundCheck magnetic_lower_bound_check(const HermitianForm& dirichlet_a,
                                           const WeightMass& b_mass,
                                           const GridFunction& psi, int sign);

}  // namespace absentia
