#include "absentia/mesh.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "absentia/kernels.hpp"

namespace absentia {

namespace {

std::string node_label(const PolarGrid& g, int idx) {
  const Point p = g.point(idx);
  std::ostringstream os;
  os << "node " << idx << " (r=" << p.r << ", theta=" << p.theta << ")";
  return os.str();
}

}  // namespace

PolarGrid::PolarGrid(double r_min, double r_max, int n_r, int n_theta,
                     double grading)
    : r_min_(r_min), r_max_(r_max), grading_(grading), n_r_(n_r),
      n_theta_(n_theta), inner_excised_(r_min > 0.0) {
  if (!(r_min >= 0.0) || !(r_max > r_min))
    throw std::invalid_argument("PolarGrid: need 0 <= r_min < r_max");
  if (n_r < 4) throw std::invalid_argument("PolarGrid: n_r must be >= 4");
  if (n_theta < 8 || n_theta % 2 != 0)
    throw std::invalid_argument("PolarGrid: n_theta must be even and >= 8");
  if (!(grading >= 1.0))
    throw std::invalid_argument("PolarGrid: grading must be >= 1");

  dtheta_ = 2.0 * M_PI / n_theta;

  // full level set i = 0..n_r; the i = 0 level of a disk is the degenerate
  // r = 0 point and is dropped, but its trapezoid segment [0, r_1] stays.
  std::vector<double> full(n_r + 1);
  for (int i = 0; i <= n_r; ++i)
    full[i] = r_min + (r_max - r_min) * std::pow(double(i) / n_r, grading);
  full.back() = r_max;

  const int first = inner_excised_ ? 0 : 1;
  levels_.assign(full.begin() + first, full.end());
  const int L = n_levels();

  w_r_.resize(L);
  for (int k = 0; k < L; ++k) {
    const int i = k + first;
    const double lo = (i == 0) ? full[0] : full[i - 1];
    const double hi = (i == n_r) ? full[n_r] : full[i + 1];
    w_r_[k] = 0.5 * (hi - lo);
  }

  quad_.resize(n_nodes());
  for (int k = 0; k < L; ++k)
    for (int j = 0; j < n_theta_; ++j)
      quad_[node(k, j)] = levels_[k] * w_r_[k] * dtheta_;

  // trapezoid in r with the r Jacobian is exact for the area
  double total = 0.0;
  for (double q : quad_) total += q;
  const double area = M_PI * (r_max * r_max - r_min * r_min);
  if (std::abs(total - area) > 1e-8 * area)
    throw std::logic_error("PolarGrid: quadrature weights do not sum to the area");

  interior_.reserve(n_nodes());
  for (int idx = 0; idx < n_nodes(); ++idx)
    if (!dirichlet(idx)) interior_.push_back(idx);
}

Point PolarGrid::point(int idx) const {
  const int k = idx / n_theta_, j = idx % n_theta_;
  const double r = levels_[k], t = theta(j);
  return {r * std::cos(t), r * std::sin(t), r, t};
}

bool PolarGrid::dirichlet(int idx) const {
  const int k = idx / n_theta_;
  if (k == n_levels() - 1) return true;
  return inner_excised_ && k == 0;
}

GridFunction sample(const PolarGrid& grid,
                    const std::function<cplx(const Point&)>& f,
                    bool as_test_function) {
  GridFunction out(grid);
  for (int idx = 0; idx < grid.n_nodes(); ++idx) {
    if (as_test_function && grid.dirichlet(idx)) continue;
    try {
      out[idx] = f(grid.point(idx));
    } catch (const std::exception& e) {
      throw std::runtime_error("sample: evaluation failed at " +
                               node_label(grid, idx) + ": " + e.what());
    }
  }
  return out;
}

double integrate(const PolarGrid& grid,
                 const std::function<double(const Point&)>& w,
                 const GridFunction& psi) {
  if (&psi.grid() != &grid)
    throw std::invalid_argument("integrate: grid function bound to another grid");
  std::vector<double> wq(grid.n_nodes());
  for (int idx = 0; idx < grid.n_nodes(); ++idx) {
    const double q = grid.quad_weight(idx);
    const double wi = w(grid.point(idx));
    if (q != 0.0 && !std::isfinite(wi))
      throw std::runtime_error("integrate: weight not finite at " +
                               node_label(grid, idx));
    wq[idx] = q * wi;
  }
  return kernels::weighted_nrm2sq(wq, psi.span());
}

cplx quad_sum(const PolarGrid& grid, const std::function<cplx(const Point&)>& f) {
  cplx s = 0.0;
  for (int idx = 0; idx < grid.n_nodes(); ++idx)
    s += grid.quad_weight(idx) * f(grid.point(idx));
  return s;
}

double curl_check(const VectorPotentialField& a,
                  const RadialFieldProfile& declared_b, const PolarGrid& grid) {
  // polar-form curl: B = (1/r) [ d_r(r A_theta) - d_theta A_r ],
  // central differences over interior levels
  const int L = grid.n_levels(), nt = grid.n_theta();
  auto a_polar = [&](int k, int j, double& ar, double& at) {
    const Point p = grid.point(grid.node(k, j));
    const Eigen::Vector2d v = a(p.x, p.y);
    ar = v[0] * std::cos(p.theta) + v[1] * std::sin(p.theta);
    at = -v[0] * std::sin(p.theta) + v[1] * std::cos(p.theta);
  };
  double worst = 0.0;
  for (int k = 1; k + 1 < L; ++k) {
    const double rm = grid.level_radius(k - 1), r0 = grid.level_radius(k),
                 rp = grid.level_radius(k + 1);
    for (int j = 0; j < nt; ++j) {
      double ar, at_m, at_p, at_dummy, ar_jm, ar_jp;
      a_polar(k - 1, j, ar, at_m);
      a_polar(k + 1, j, ar, at_p);
      a_polar(k, (j + 1) % nt, ar_jp, at_dummy);
      a_polar(k, (j + nt - 1) % nt, ar_jm, at_dummy);
      const double d_r = (rp * at_p - rm * at_m) / (rp - rm);
      const double d_t = (ar_jp - ar_jm) / (2.0 * grid.dtheta());
      const double curl = (d_r - d_t) / r0;
      worst = std::max(worst, std::abs(curl - declared_b(r0)));
    }
  }
  return worst;
}

}  // namespace absentia
