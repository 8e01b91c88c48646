#include "absentia/forms.hpp"

#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace absentia {

WeightMass::WeightMass(const PolarGrid& grid, Eigen::VectorXd diag)
    : grid_(&grid), diag_(std::move(diag)) {
  if (diag_.size() != grid.n_nodes())
    throw std::invalid_argument("WeightMass: size mismatch");
  nonnegative_ = diag_.minCoeff() >= 0.0;
}

double WeightMass::apply(const GridFunction& psi) const {
  if (&psi.grid() != grid_)
    throw std::invalid_argument("WeightMass: grid mismatch");
  double s = 0.0;
  for (int i = 0; i < diag_.size(); ++i) s += diag_[i] * std::norm(psi[i]);
  return s;
}

Eigen::VectorXd WeightMass::reduced(const std::vector<int>& dofs) const {
  Eigen::VectorXd out(dofs.size());
  for (std::size_t i = 0; i < dofs.size(); ++i) out[i] = diag_[dofs[i]];
  return out;
}

WeightMass assemble_weight(const std::function<double(const Point&)>& w,
                           const PolarGrid& grid, bool require_nonnegative) {
  Eigen::VectorXd diag(grid.n_nodes());
  for (int idx = 0; idx < grid.n_nodes(); ++idx) {
    const Point p = grid.point(idx);
    const double wi = w(p);
    if (!std::isfinite(wi)) {
      std::ostringstream os;
      os << "assemble_weight: non-finite weight at node " << idx
         << " (r=" << p.r << ", theta=" << p.theta << ")";
      throw std::runtime_error(os.str());
    }
    if (require_nonnegative && wi < 0.0) {
      std::ostringstream os;
      os << "assemble_weight: negative weight at node " << idx
         << " but a non-negative weight was required";
      throw std::runtime_error(os.str());
    }
    diag[idx] = grid.quad_weight(idx) * wi;
  }
  return WeightMass(grid, std::move(diag));
}

WeightMass lumped_mass(const PolarGrid& grid) {
  return assemble_weight([](const Point&) { return 1.0; }, grid, true);
}

HermitianForm::HermitianForm(const PolarGrid& grid, SpMat mat,
                             bool positive_semidefinite)
    : grid_(&grid), mat_(std::move(mat)), psd_(positive_semidefinite) {}

double HermitianForm::value(const GridFunction& psi) const {
  if (&psi.grid() != grid_)
    throw std::invalid_argument("HermitianForm: grid mismatch");
  return (psi.values().adjoint() * (mat_ * psi.values()))(0).real();
}

GridFunction HermitianForm::apply(const GridFunction& psi) const {
  GridFunction out(*grid_);
  out.values() = mat_ * psi.values();
  return out;
}

SpMat HermitianForm::reduced(const std::vector<int>& dofs) const {
  std::vector<int> map(mat_.rows(), -1);
  for (std::size_t i = 0; i < dofs.size(); ++i) map[dofs[i]] = static_cast<int>(i);
  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(mat_.nonZeros());
  for (int col = 0; col < mat_.outerSize(); ++col)
    for (SpMat::InnerIterator it(mat_, col); it; ++it)
      if (map[it.row()] >= 0 && map[col] >= 0)
        trip.emplace_back(map[it.row()], map[col], it.value());
  SpMat out(dofs.size(), dofs.size());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

void HermitianForm::write_matrix_market(std::ostream& os) const {
  os << "%%MatrixMarket matrix coordinate complex general\n";
  os << mat_.rows() << " " << mat_.cols() << " " << mat_.nonZeros() << "\n";
  for (int col = 0; col < mat_.outerSize(); ++col)
    for (SpMat::InnerIterator it(mat_, col); it; ++it)
      os << it.row() + 1 << " " << col + 1 << " " << it.value().real() << " "
         << it.value().imag() << "\n";
}

HermitianForm assemble_dirichlet_form(
    const VectorPotentialField& a, const PolarGrid& grid,
    const std::function<double(double)>& radial_weight) {
  if (a.gauge_tag() == GaugeTag::aharonov_bohm && a.origin_singular() &&
      !grid.inner_excised())
    throw std::runtime_error(
        "assemble_dirichlet_form: AB potential is singular at the origin; "
        "use a grid with r_min > 0 (excised inner disk)");

  auto rw = [&](double r) { return radial_weight ? radial_weight(r) : 1.0; };

  const int L = grid.n_levels(), nt = grid.n_theta();
  const double dth = grid.dtheta();
  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(static_cast<std::size_t>(grid.n_nodes()) * 8);

  auto add_edge = [&](int na, int nb, double w, double phase) {
    if (!std::isfinite(w) || !std::isfinite(phase))
      throw std::runtime_error("assemble_dirichlet_form: non-finite link data");
    const cplx e = std::polar(1.0, phase);
    trip.emplace_back(na, na, cplx(w, 0.0));
    trip.emplace_back(nb, nb, cplx(w, 0.0));
    trip.emplace_back(na, nb, -w * e);
    trip.emplace_back(nb, na, -w * std::conj(e));
  };

  // radial links
  for (int k = 0; k + 1 < L; ++k) {
    const double r0 = grid.level_radius(k), r1 = grid.level_radius(k + 1);
    const double rbar = 0.5 * (r0 + r1), dr = r1 - r0;
    const double w = rw(rbar) * rbar * dth / dr;
    for (int j = 0; j < nt; ++j)
      add_edge(grid.node(k, j), grid.node(k + 1, j), w,
               a.radial_link(r0, r1, grid.theta(j)));
  }
  // angular links, arc length r dtheta in the difference quotient
  for (int k = 0; k < L; ++k) {
    const double r = grid.level_radius(k);
    const double w = rw(r) * grid.radial_weight(k) / (r * dth);
    for (int j = 0; j < nt; ++j)
      add_edge(grid.node(k, j), grid.node(k, (j + 1) % nt), w,
               a.angular_link(r, grid.theta(j), grid.theta(j) + dth));
  }

  SpMat mat(grid.n_nodes(), grid.n_nodes());
  mat.setFromTriplets(trip.begin(), trip.end());
  return HermitianForm(grid, std::move(mat), true);
}

HermitianForm hamiltonian_form(const HermitianForm& dirichlet,
                               const WeightMass& v_mass) {
  if (&dirichlet.grid() != &v_mass.grid())
    throw std::invalid_argument("hamiltonian_form: grids differ");
  SpMat mat = dirichlet.matrix();
  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(v_mass.diagonal().size());
  for (int i = 0; i < v_mass.diagonal().size(); ++i)
    if (v_mass.diagonal()[i] != 0.0)
      trip.emplace_back(i, i, cplx(v_mass.diagonal()[i], 0.0));
  SpMat vd(mat.rows(), mat.cols());
  vd.setFromTriplets(trip.begin(), trip.end());
  mat += vd;
  const bool psd = dirichlet.positive_semidefinite() && v_mass.nonnegative();
  return HermitianForm(dirichlet.grid(), std::move(mat), psd);
}

DiamagneticCheck diamagnetic_check(const HermitianForm& dirichlet_a,
                                   const HermitianForm& dirichlet_0,
                                   const GridFunction& psi) {
  if (&dirichlet_a.grid() != &dirichlet_0.grid())
    throw std::invalid_argument("diamagnetic_check: grids differ");
  GridFunction mod(psi.grid());
  for (int i = 0; i < psi.size(); ++i) mod[i] = std::abs(psi[i]);
  DiamagneticCheck out;
  out.lhs = dirichlet_a.value(psi);
  out.rhs = dirichlet_0.value(mod);
  out.holds = out.lhs >= out.rhs - 1e-12 * (1.0 + out.lhs);
  return out;
}

LowerBoundCheck magnetic_lower_bound_check(const HermitianForm& dirichlet_a,
                                           const WeightMass& b_mass,
                                           const GridFunction& psi, int sign) {
  LowerBoundCheck out;
  out.lhs = dirichlet_a.value(psi);
  out.rhs = sign * b_mass.apply(psi);
  out.holds = out.lhs >= out.rhs - 1e-12 * (1.0 + std::abs(out.lhs));
  return out;
}

}  // namespace absentia
