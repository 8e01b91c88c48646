#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "absentia/fields.hpp"

namespace absentia {

using cplx = std::complex<double>;

struct Point {
  double x, y, r, theta;
};

/// Tensor polar grid on a disk (r_min = 0) or annulus (r_min > 0) with
/// trapezoidal quadrature in r (including the r Jacobian) and the uniform
/// rule in theta. Radial levels are graded, r_i = r_min + (r_max -
/// r_min)(i/n_r)^grading; the degenerate r = 0 level of a disk is dropped
/// (its Jacobian weight vanishes). The outer ring carries a Dirichlet
/// marker, and so does the inner ring when the origin is excised.
/// Immutable; grid functions keep a pointer, so the grid must outlive them.
class PolarGrid {
 public:
  PolarGrid(double r_min, double r_max, int n_r, int n_theta,
            double grading = 1.0);

  int n_r() const { return n_r_; }
  int n_theta() const { return n_theta_; }
  double r_min() const { return r_min_; }
  double r_max() const { return r_max_; }
  double grading() const { return grading_; }

  int n_levels() const { return static_cast<int>(levels_.size()); }
  int n_nodes() const { return n_levels() * n_theta_; }
  double level_radius(int k) const { return levels_[k]; }
  /// Trapezoid weight of radial level k (without Jacobian or dtheta).
  double radial_weight(int k) const { return w_r_[k]; }
  double dtheta() const { return dtheta_; }
  double theta(int j) const { return j * dtheta_; }

  int node(int k, int j) const { return k * n_theta_ + j; }
  int level_of(int idx) const { return idx / n_theta_; }
  Point point(int idx) const;
  double quad_weight(int idx) const { return quad_[idx]; }
  std::span<const double> quad_weights() const { return quad_; }

  bool inner_excised() const { return inner_excised_; }
  bool dirichlet(int idx) const;
  /// Indices of non-Dirichlet nodes, in node order.
  const std::vector<int>& interior_nodes() const { return interior_; }

 private:
  double r_min_, r_max_, grading_;
  int n_r_, n_theta_;
  bool inner_excised_;
  double dtheta_;
  std::vector<double> levels_, w_r_, quad_;
  std::vector<int> interior_;
};

/// Complex nodal values bound to a grid.
class GridFunction {
 public:
  explicit GridFunction(const PolarGrid& grid)
      : grid_(&grid), values_(Eigen::VectorXcd::Zero(grid.n_nodes())) {}

  const PolarGrid& grid() const { return *grid_; }
  Eigen::VectorXcd& values() { return values_; }
  const Eigen::VectorXcd& values() const { return values_; }
  cplx& operator[](int i) { return values_[i]; }
  cplx operator[](int i) const { return values_[i]; }
  int size() const { return static_cast<int>(values_.size()); }
  std::span<const cplx> span() const {
    return {values_.data(), static_cast<std::size_t>(values_.size())};
  }
  std::span<cplx> span() {
    return {values_.data(), static_cast<std::size_t>(values_.size())};
  }

 private:
  const PolarGrid* grid_;
  Eigen::VectorXcd values_;
};

/// Nodal sampling of f. With as_test_function, Dirichlet nodes are clamped
/// to zero. Evaluation failures are rethrown with the node location.
GridFunction sample(const PolarGrid& grid,
                    const std::function<cplx(const Point&)>& f,
                    bool as_test_function = false);

/// sum_i quad_i w(x_i) |psi_i|^2. Throws (naming the node) if w is not
/// finite at a node with nonzero quadrature weight.
double integrate(const PolarGrid& grid,
                 const std::function<double(const Point&)>& w,
                 const GridFunction& psi);

/// Plain quadrature sum, sum_i quad_i f(x_i).
cplx quad_sum(const PolarGrid& grid, const std::function<cplx(const Point&)>& f);

/// Max-abs discrepancy between the finite-difference curl of A and the
/// declared radial field over interior nodes (polar-form curl, central
/// differences).
double curl_check(const VectorPotentialField& a,
                  const RadialFieldProfile& declared_b, const PolarGrid& grid);

}  // namespace absentia
