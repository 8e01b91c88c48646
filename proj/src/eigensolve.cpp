#include "absentia/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include "absentia/kernels.hpp"

namespace absentia {

namespace {

using Vec = Eigen::VectorXcd;

std::span<const cplx> cspan(const Vec& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}
std::span<cplx> mspan(Vec& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

// deterministic start vector; avoids std::normal_distribution, whose output
// sequence is implementation-defined
Vec seeded_vector(int n, std::mt19937_64& rng) {
  Vec v(n);
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * ((rng() >> 11) * 0x1p-53) - 1.0;
    const double b = 2.0 * ((rng() >> 11) * 0x1p-53) - 1.0;
    v[i] = cplx(a, b);
  }
  return v;
}

// twice-iterated classical Gram-Schmidt against orthonormal vectors
void orthogonalize(Vec& v, const std::vector<Vec>& basis) {
  for (int pass = 0; pass < 2; ++pass)
    for (const Vec& q : basis) {
      const cplx c = kernels::dot(cspan(q), cspan(v));
      kernels::axpy(-c, cspan(q), mspan(v));
    }
}

struct ExtremeResult {
  double theta = 0.0;
  Vec vec;
  double resid_est = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Largest eigenpair of a Hermitian operator restricted orthogonal to defl,
// by Lanczos with full reorthogonalization. A breakdown closes the Krylov
// space exactly, so the top Ritz value is then exact for the reachable
// subspace of the (generic random) start vector.
ExtremeResult lanczos_largest(const std::function<void(const Vec&, Vec&)>& op,
                              int n, const std::vector<Vec>& defl, double rtol,
                              int iter_budget, std::mt19937_64& rng) {
  ExtremeResult out;
  if (n == 0 || iter_budget <= 0) return out;

  std::vector<Vec> basis;
  {
    Vec v = seeded_vector(n, rng);
    orthogonalize(v, defl);
    const double nv = std::sqrt(kernels::nrm2sq(cspan(v)));
    if (nv <= 1e-12 * std::sqrt(double(n))) return out;  // complement exhausted
    kernels::scal(cplx(1.0 / nv, 0.0), mspan(v));
    basis.push_back(std::move(v));
  }

  std::vector<double> alpha, beta;
  auto top_of_tridiag = [&](double& theta, Eigen::VectorXd& s) {
    const int m = static_cast<int>(alpha.size());
    Eigen::VectorXd dm = Eigen::Map<const Eigen::VectorXd>(alpha.data(), m);
    Eigen::VectorXd e(std::max(m - 1, 0));
    for (int i = 0; i + 1 < m; ++i) e[i] = beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(dm, e);
    theta = es.eigenvalues()[m - 1];
    s = es.eigenvectors().col(m - 1);
  };

  Vec w(n), v_prev;
  double norm_est = 0.0;
  double last_est = std::numeric_limits<double>::infinity();
  int stagnant = 0;
  int iters = 0;
  double theta = 0.0;
  Eigen::VectorXd s;
  double est = 0.0;
  bool happy = false;

  while (iters < iter_budget) {
    op(basis.back(), w);
    ++iters;
    const double a = kernels::dot(cspan(basis.back()), cspan(w)).real();
    alpha.push_back(a);
    kernels::axpy(cplx(-a, 0.0), cspan(basis.back()), mspan(w));
    if (v_prev.size() != 0)
      kernels::axpy(cplx(-beta.back(), 0.0), cspan(v_prev), mspan(w));
    orthogonalize(w, defl);
    orthogonalize(w, basis);
    const double b = std::sqrt(kernels::nrm2sq(cspan(w)));
    norm_est = std::max(norm_est, std::abs(a) + b);

    top_of_tridiag(theta, s);
    est = b * std::abs(s[s.size() - 1]);

    if (est <= rtol * std::abs(theta) || est <= 1e-14 * norm_est) {
      happy = true;
      break;
    }
    if (est >= 0.9 * last_est && est <= 1e-10 * std::max(norm_est, 1e-300))
      ++stagnant;
    else
      stagnant = 0;
    last_est = est;
    if (stagnant >= 5) {
      happy = true;  // round-off floor
      break;
    }
    if (b <= 1e-13 * std::max(norm_est, 1e-300) ||
        static_cast<int>(basis.size()) >= n) {
      // exact closure of the Krylov space
      happy = b <= 1e-13 * std::max(norm_est, 1e-300);
      break;
    }
    beta.push_back(b);
    kernels::scal(cplx(1.0 / b, 0.0), mspan(w));
    v_prev = basis.back();
    basis.push_back(w);
  }

  out.theta = theta;
  out.resid_est = est;
  out.iterations = iters;
  out.converged = happy;
  out.vec = Vec::Zero(n);
  for (int i = 0; i < s.size(); ++i)
    kernels::axpy(cplx(s[i], 0.0), cspan(basis[i]), mspan(out.vec));
  const double nv = std::sqrt(kernels::nrm2sq(cspan(out.vec)));
  if (nv > 0.0) kernels::scal(cplx(1.0 / nv, 0.0), mspan(out.vec));
  return out;
}

SpMat shifted_matrix(const SpMat& h, const Eigen::VectorXd& m, double sigma) {
  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(m.size());
  for (int i = 0; i < m.size(); ++i)
    trip.emplace_back(i, i, cplx(-sigma * m[i], 0.0));
  SpMat shift(h.rows(), h.cols());
  shift.setFromTriplets(trip.begin(), trip.end());
  return h + shift;
}

}  // namespace

PencilEigenResult smallest_eigs_pencil(const SpMat& h, const Eigen::VectorXd& m,
                                       const SolveOptions& opts) {
  const int n = static_cast<int>(h.rows());
  if (h.cols() != n) throw std::invalid_argument("smallest_eigs: H not square");
  Eigen::VectorXd mm = m.size() == 0 ? Eigen::VectorXd::Ones(n) : m;
  if (mm.size() != n || (n > 0 && mm.minCoeff() <= 0.0))
    throw std::invalid_argument("smallest_eigs: M must be a positive diagonal");
  if (opts.k < 1) throw std::invalid_argument("smallest_eigs: k must be >= 1");

  PencilEigenResult out;
  if (n == 0) return out;

  // Gershgorin lower bound of the pencil:
  // lambda >= min_i (H_ii - sum_{j != i} |H_ij|) / M_ii
  Eigen::VectorXd offdiag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  for (int col = 0; col < h.outerSize(); ++col)
    for (SpMat::InnerIterator it(h, col); it; ++it) {
      if (it.row() == col)
        diag[col] = it.value().real();
      else
        offdiag[it.row()] += std::abs(it.value());
    }
  double bound = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i)
    bound = std::min(bound, (diag[i] - offdiag[i]) / mm[i]);

  Eigen::SimplicialLDLT<SpMat, Eigen::Lower> ldlt;
  double sigma = 0.0;
  bool factored = false;
  for (int attempt = 0; attempt < 4 && !factored; ++attempt) {
    sigma = bound - std::pow(10.0, attempt) * 1e-3 * (1.0 + std::abs(bound));
    out.shift_history.push_back(sigma);
    ldlt.compute(shifted_matrix(h, mm, sigma));
    factored = ldlt.info() == Eigen::Success;
  }
  if (!factored) {
    std::ostringstream os;
    os << "smallest_eigs: factorization breakdown; shifts tried:";
    for (double sh : out.shift_history) os << " " << sh;
    throw std::runtime_error(os.str());
  }

  const Vec dc = mm.cwiseSqrt().cast<cplx>();
  auto op = [&](const Vec& x, Vec& y) {
    Vec t = dc.cwiseProduct(x);
    y = dc.cwiseProduct(ldlt.solve(t));
  };

  std::mt19937_64 rng(opts.seed);
  const double rtol = std::min(opts.tol, 1e-12);
  std::vector<Vec> found;
  int iters = 0;
  bool all_ok = true;
  std::vector<std::pair<double, int>> order;
  std::vector<Vec> vecs;
  std::vector<double> resids;

  const Vec mc = mm.cast<cplx>();
  for (int i = 0; i < opts.k; ++i) {
    ExtremeResult r =
        lanczos_largest(op, n, found, rtol, opts.max_iter - iters, rng);
    iters += r.iterations;
    if (r.vec.size() == 0 || r.theta <= 0.0) {
      all_ok = false;
      break;
    }
    found.push_back(r.vec);
    const double lambda = sigma + 1.0 / r.theta;
    Vec v = r.vec.cwiseQuotient(dc);
    const double vn = v.norm();
    const double res = (h * v - lambda * mc.cwiseProduct(v)).norm() / vn;
    all_ok = all_ok && r.converged && res <= opts.tol;
    const double mnorm = std::sqrt(kernels::weighted_nrm2sq(
        {mm.data(), static_cast<std::size_t>(n)}, cspan(v)));
    v /= mnorm;
    order.emplace_back(lambda, static_cast<int>(vecs.size()));
    vecs.push_back(std::move(v));
    resids.push_back(res);
  }
  if (order.size() < static_cast<std::size_t>(opts.k)) all_ok = false;

  std::sort(order.begin(), order.end());
  for (const auto& [lam, idx] : order) {
    out.eigenvalues.push_back(lam);
    out.eigenvectors.push_back(std::move(vecs[idx]));
    out.residual_norms.push_back(resids[idx]);
  }
  out.iterations = iters;
  out.converged = all_ok;
  return out;
}

SubordinationConstant sup_rayleigh_pencil(const Eigen::VectorXd& w,
                                          const SpMat& k,
                                          const SolveOptions& opts) {
  const int n = static_cast<int>(k.rows());
  if (w.size() != n)
    throw std::invalid_argument("sup_rayleigh: dimension mismatch");
  if (n > 0 && w.minCoeff() < 0.0)
    throw std::invalid_argument("sup_rayleigh: weight has negative entries");

  SubordinationConstant out;
  out.seed = opts.seed;
  if (n == 0 || w.maxCoeff() == 0.0) return out;  // c = 0 for zero weight

  Eigen::SimplicialLDLT<SpMat, Eigen::Lower> ldlt(k);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error(
        "sup_rayleigh: factorization of the form failed (not positive "
        "definite?)");

  const Vec sc = w.cwiseSqrt().cast<cplx>();
  auto op = [&](const Vec& x, Vec& y) {
    Vec t = sc.cwiseProduct(x);
    y = sc.cwiseProduct(ldlt.solve(t));
  };

  std::mt19937_64 rng(opts.seed);
  const double rtol = std::min(opts.tol, 1e-12);
  ExtremeResult r = lanczos_largest(op, n, {}, rtol, opts.max_iter, rng);
  out.iterations = r.iterations;
  if (r.vec.size() == 0) {
    out.converged = false;
    return out;
  }
  Vec t(n);
  op(r.vec, t);
  t -= cplx(r.theta, 0.0) * r.vec;
  out.residual = t.norm();
  out.value = std::max(r.theta, 0.0);
  out.b_value = std::sqrt(out.value);
  out.converged = r.converged && out.residual <= opts.tol * (1.0 + out.value);
  return out;
}

SpectralResult smallest_eigs(const HermitianForm& h, const WeightMass* m,
                             const SolveOptions& opts) {
  const PolarGrid& grid = h.grid();
  if (m && &m->grid() != &grid)
    throw std::invalid_argument("smallest_eigs: mass on a different grid");
  const std::vector<int>& dofs = grid.interior_nodes();
  Eigen::VectorXd mr;
  if (m) mr = m->reduced(dofs);
  PencilEigenResult r = smallest_eigs_pencil(h.reduced(dofs), mr, opts);

  SpectralResult out;
  out.eigenvalues = r.eigenvalues;
  out.residual_norms = r.residual_norms;
  out.iterations = r.iterations;
  out.converged = r.converged;
  for (const Vec& v : r.eigenvectors) {
    GridFunction g(grid);
    for (std::size_t i = 0; i < dofs.size(); ++i) g[dofs[i]] = v[i];
    out.eigenvectors.push_back(std::move(g));
  }
  return out;
}

SubordinationConstant sup_rayleigh(const WeightMass& w, const HermitianForm& k,
                                   const SolveOptions& opts) {
  if (&w.grid() != &k.grid())
    throw std::invalid_argument("sup_rayleigh: grid mismatch");
  if (!w.nonnegative())
    throw std::invalid_argument("sup_rayleigh: weight has negative entries");
  const std::vector<int>& dofs = k.grid().interior_nodes();
  return sup_rayleigh_pencil(w.reduced(dofs), k.reduced(dofs), opts);
}

double participation_radius(const GridFunction& v, double mass_fraction) {
  const PolarGrid& g = v.grid();
  std::vector<double> per_level(g.n_levels(), 0.0);
  double total = 0.0;
  for (int idx = 0; idx < g.n_nodes(); ++idx) {
    const double c = g.quad_weight(idx) * std::norm(v[idx]);
    per_level[g.level_of(idx)] += c;
    total += c;
  }
  if (total <= 0.0) return 0.0;
  double cum = 0.0;
  for (int k = 0; k < g.n_levels(); ++k) {
    cum += per_level[k];
    if (cum >= mass_fraction * total) return g.level_radius(k);
  }
  return g.level_radius(g.n_levels() - 1);
}

StabilizationResult stabilization_probe(
    const std::function<RadiusSample(double)>& solve_at_radius,
    const std::vector<double>& radii) {
  if (radii.size() < 3 || !std::is_sorted(radii.begin(), radii.end()))
    throw std::invalid_argument(
        "stabilization_probe: need at least 3 increasing radii");
  StabilizationResult out;
  for (double r : radii) out.samples.push_back(solve_at_radius(r));

  for (const RadiusSample& s : out.samples)
    if (!s.converged) {
      out.verdict = StabilizationVerdict::withheld;
      out.note = "verdict withheld: non-converged solve in the sweep";
      return out;
    }

  bool agree = true;
  for (std::size_t i = 1; i < out.samples.size(); ++i) {
    const double tol_stab = 1e-3 * (1.0 + std::abs(out.samples[i].lambda1));
    if (std::abs(out.samples[i].lambda1 - out.samples[i - 1].lambda1) > tol_stab)
      agree = false;
  }
  const RadiusSample& last = out.samples.back();
  const bool localized = last.participation_radius <= 0.5 * last.r_max;
  if (agree && localized) {
    out.verdict = StabilizationVerdict::genuine;
    out.note = "lambda_1 stable across radii and eigenfunction localized";
  } else {
    out.verdict = StabilizationVerdict::artifact;
    out.note = agree ? "eigenfunction fills the truncated domain"
                     : "lambda_1 drifts with the truncation radius";
  }
  return out;
}

}  // namespace absentia
