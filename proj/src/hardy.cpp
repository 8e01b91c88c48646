#include "absentia/hardy.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace absentia {

namespace {

// minimal Rayleigh quotient of (form, weight mass) as the reciprocal of the
// exchanged-roles supremum; the weight may vanish on part of the domain
HardyProbeResult min_quotient(HardyId id, const HermitianForm& form,
                              const WeightMass& w, double reference,
                              const HardyOptions& opts) {
  HardyProbeResult out;
  out.id = id;
  out.reference_bound = reference;
  out.tol_mesh = opts.tol_mesh;
  const PolarGrid& g = form.grid();
  out.n_r = g.n_r();
  out.n_theta = g.n_theta();
  out.r_min = g.r_min();
  out.r_max = g.r_max();
  out.grading = g.grading();

  SubordinationConstant c = sup_rayleigh(w, form, opts.solve);
  out.converged = c.converged;
  if (c.value <= 0.0) {
    out.skipped = true;
    out.note = "weight vanishes on the grid; probe skipped";
    return out;
  }
  out.computed_constant = 1.0 / c.value;
  out.satisfied = out.computed_constant >= reference * (1.0 - opts.tol_mesh);
  return out;
}

}  // namespace

std::string hardy_id_name(HardyId id) {
  switch (id) {
    case HardyId::LW: return "LW";
    case HardyId::CK: return "CK";
    case HardyId::tilde_CK: return "tilde_CK";
    case HardyId::weighted_classical: return "weighted_classical";
    case HardyId::HP_disk: return "HP_disk";
    case HardyId::AB: return "AB";
    case HardyId::AB_weighted: return "AB_weighted";
    case HardyId::circle: return "circle";
  }
  return "?";
}

HardyProbeResult lw_probe(const RadialFieldProfile& field, const PolarGrid& grid,
                          const HardyOptions& opts) {
  const VectorPotentialField a = transverse_gauge(field);
  const FluxFunction phi = flux_profile(field);
  bool weight_zero = true;
  for (int k = 0; k < grid.n_levels() && weight_zero; ++k)
    if (flux_distance(phi(grid.level_radius(k))) != 0.0) weight_zero = false;
  if (weight_zero) {
    HardyProbeResult out;
    out.id = HardyId::LW;
    out.reference_bound = 1.0;
    out.tol_mesh = opts.tol_mesh;
    out.skipped = true;
    out.note = "flux is an integer at every node; LW weight vanishes";
    return out;
  }
  const HermitianForm form = assemble_dirichlet_form(a, grid);
  const WeightMass w = assemble_weight(
      [&](const Point& p) {
        const double d = flux_distance(phi(p.r));
        return d * d / (p.r * p.r);
      },
      grid, true);
  return min_quotient(HardyId::LW, form, w, 1.0, opts);
}

HardyProbeResult ck_probe(const RadialFieldProfile& field, const PolarGrid& grid,
                          CkWeight weight, const HardyOptions& opts) {
  const HermitianForm form = assemble_dirichlet_form(transverse_gauge(field), grid);
  std::function<double(const Point&)> wfn;
  if (weight == CkWeight::log_weight) {
    wfn = [](const Point& p) {
      const double lg = std::log(std::max(p.r, 1e-8));
      return 1.0 / (1.0 + p.r * p.r * lg * lg);
    };
  } else {
    wfn = [](const Point& p) { return 1.0 / (1.0 + p.r * p.r); };
  }
  const HardyId id = weight == CkWeight::log_weight ? HardyId::CK : HardyId::tilde_CK;
  HardyProbeResult out =
      min_quotient(id, form, assemble_weight(wfn, grid, true), 0.0, opts);
  out.satisfied = out.computed_constant >= 0.0;  // positivity probe
  return out;
}

HardyProbeResult hp_disk_probe(double R, const PolarGrid& grid,
                               const HardyOptions& opts) {
  if (std::abs(grid.r_max() - R) > 1e-12 * R || grid.r_min() != 0.0)
    throw std::invalid_argument("hp_disk_probe: grid must cover the disk D_R");
  const HermitianForm form =
      assemble_dirichlet_form(VectorPotentialField::zero(), grid);
  const WeightMass w =
      assemble_weight([](const Point& p) { return 1.0 / p.r; }, grid, true);
  return min_quotient(HardyId::HP_disk, form, w, 1.0 / (4.0 * R), opts);
}

HardyProbeResult weighted_classical_probe(int d, const PolarGrid* grid,
                                          const HardyOptions& opts) {
  const double reference = (d - 1) * (d - 1) / 4.0;
  if (d != 2) {
    HardyProbeResult out;
    out.id = HardyId::weighted_classical;
    out.reference_bound = reference;
    out.computed_constant = reference;
    out.tol_mesh = opts.tol_mesh;
    out.satisfied = true;
    out.note = "arithmetic-only reference for d != 2";
    return out;
  }
  if (!grid)
    throw std::invalid_argument("weighted_classical_probe: d = 2 needs a grid");
  const HermitianForm form = assemble_dirichlet_form(
      VectorPotentialField::zero(), *grid, [](double r) { return r; });
  const WeightMass w =
      assemble_weight([](const Point& p) { return 1.0 / p.r; }, *grid, true);
  return min_quotient(HardyId::weighted_classical, form, w, reference, opts);
}

HardyProbeResult ab_probe(const AngularFluxDensity& alpha, const PolarGrid& grid,
                          const HardyOptions& opts) {
  const double beta = alpha.flux_distance();
  if (beta <= 0.0)
    throw std::invalid_argument(
        "ab_probe: beta = 0 (gauge-trivial flux), probe rejected");
  const HermitianForm form = assemble_dirichlet_form(ab_potential(alpha), grid);
  const WeightMass w = assemble_weight(
      [](const Point& p) { return 1.0 / (p.r * p.r); }, grid, true);
  return min_quotient(HardyId::AB, form, w, beta * beta, opts);
}

HardyProbeResult ab_weighted_probe(const AngularFluxDensity& alpha,
                                   const PolarGrid& grid,
                                   const HardyOptions& opts) {
  const double beta = alpha.flux_distance();
  const HermitianForm form = assemble_dirichlet_form(
      ab_potential(alpha), grid, [](double r) { return r; });
  const WeightMass w =
      assemble_weight([](const Point& p) { return 1.0 / p.r; }, grid, true);
  return min_quotient(HardyId::AB_weighted, form, w, 0.25 + beta * beta, opts);
}

namespace {

double circle_eigenvalue_once(const AngularFluxDensity& alpha, int n_side) {
  // first-order operator -i d/dtheta + alpha in the Fourier basis e^{i n t};
  // its eigenvalues square to the spectrum of the requested operator
  const int dim = 2 * n_side + 1;
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) d(i, i) = double(i - n_side) + alpha.mean_flux();
  for (int k = 1; k <= alpha.n_harmonics(); ++k) {
    const cplx hat(alpha.cos_coef(k) / 2.0, -alpha.sin_coef(k) / 2.0);
    for (int i = k; i < dim; ++i) {
      d(i, i - k) = hat;            // row - col = +k
      d(i - k, i) = std::conj(hat);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(d);
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < dim; ++i)
    best = std::min(best, es.eigenvalues()[i] * es.eigenvalues()[i]);
  return best;
}

}  // namespace

double circle_eigenvalue(const AngularFluxDensity& alpha, int n_modes) {
  if (n_modes < 16)
    throw std::invalid_argument("circle_eigenvalue: n_modes must be >= 16");
  int n_side = n_modes / 2;
  double prev = circle_eigenvalue_once(alpha, n_side);
  for (int round = 0; round < 2; ++round) {
    n_side *= 2;
    const double next = circle_eigenvalue_once(alpha, n_side);
    if (std::abs(next - prev) <= 1e-6 * (1.0 + std::abs(next))) return next;
    prev = next;
  }
  throw std::runtime_error(
      "circle_eigenvalue: mode truncation did not settle after a retry");
}

}  // namespace absentia
