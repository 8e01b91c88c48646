#include "absentia/identities.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace absentia {

namespace {

double pw(double coef, double r, int p) {
  if (coef == 0.0) return 0.0;
  return coef * std::pow(r, p);
}

}  // namespace

RadialProfile gaussian_profile(double s, int m) {
  if (!(s > 0.0) || m < 0)
    throw std::invalid_argument("gaussian_profile: bad parameters");
  const double t = 1.0 / (s * s);
  RadialProfile p;
  p.angular_momentum = m;
  p.f = [=](double r) { return pw(1.0, r, m) * std::exp(-0.5 * t * r * r); };
  p.df = [=](double r) {
    const double e = std::exp(-0.5 * t * r * r);
    return (pw(double(m), r, m - 1) - pw(t, r, m + 1)) * e;
  };
  p.d2f = [=](double r) {
    const double e = std::exp(-0.5 * t * r * r);
    return (pw(double(m) * (m - 1), r, m - 2) - pw((2 * m + 1) * t, r, m) +
            pw(t * t, r, m + 2)) * e;
  };
  p.d3f = [=](double r) {
    const double e = std::exp(-0.5 * t * r * r);
    return (pw(double(m) * (m - 1) * (m - 2), r, m - 3) -
            pw(3.0 * m * m * t, r, m - 1) + pw(3.0 * (m + 1) * t * t, r, m + 1) -
            pw(t * t * t, r, m + 3)) * e;
  };
  return p;
}

ManufacturedEigenpair::ManufacturedEigenpair(RadialProfile u,
                                             const RadialFieldProfile& field,
                                             double lambda)
    : u_(std::move(u)), field_(field), flux_(flux_profile(field)),
      lambda_(lambda) {
  if (!u_.f || !u_.df || !u_.d2f)
    throw std::invalid_argument("ManufacturedEigenpair: profile needs f, f', f''");
  // u must be positive on the working domain and decaying
  double prev = 0.0;
  for (int i = 1; i <= 64; ++i) {
    const double r = 8.0 * i / 64.0;
    const double v = u_.f(r);
    if (!(v > 0.0))
      throw std::invalid_argument(
          "ManufacturedEigenpair: u has zeros in the working domain");
    if (i == 1) prev = v;
  }
  const double tail = u_.f(8.0), head = std::max(prev, u_.f(1.0));
  if (!(tail * tail < 1e-12 * head * head))
    throw std::invalid_argument(
        "ManufacturedEigenpair: u does not decay (tail mass too large)");
}

double ManufacturedEigenpair::a_theta(double r) const {
  if (r <= 0.0) return 0.0;  // Phi ~ B(0) r^2 / 2, removable
  return flux_(r) / r;
}

double ManufacturedEigenpair::v_derived(double r) const {
  if (!(r > 0.0))
    throw std::domain_error("v_derived: defined for r > 0");
  const double m = u_.angular_momentum;
  const double f = u_.f(r), df = u_.df(r), d2f = u_.d2f(r);
  const double at = a_theta(r);
  return lambda_ + (d2f + df / r - m * m * f / (r * r)) / f - 2.0 * m * at / r -
         at * at;
}

double ManufacturedEigenpair::dv_derived(double r) const {
  if (!(r > 0.0))
    throw std::domain_error("dv_derived: defined for r > 0");
  const double m = u_.angular_momentum;
  const double at = a_theta(r), b = field_(r);
  const double dat_over_r = (b - 2.0 * at / r) / r;  // d/dr (a_theta / r)
  if (!u_.d3f) {
    const double h = 1e-5 * (1.0 + r);
    return (v_derived(r + h) - v_derived(std::max(r - h, 1e-12))) /
           (r + h - std::max(r - h, 1e-12));
  }
  const double f = u_.f(r), df = u_.df(r), d2f = u_.d2f(r), d3f = (*u_.d3f)(r);
  const double lap_over_f = (d2f + df / r - m * m * f / (r * r)) / f;
  const double dlap =
      (d3f + d2f / r - df / (r * r) - m * m * df / (r * r) +
       2.0 * m * m * f / (r * r * r)) / f -
      lap_over_f * (df / f);
  return dlap - 2.0 * m * dat_over_r - 2.0 * at * (b - at / r);
}

double ManufacturedEigenpair::eigen_equation_residual(double r) const {
  const double m = u_.angular_momentum;
  const double f = u_.f(r), df = u_.df(r), d2f = u_.d2f(r);
  const double at = a_theta(r);
  const double hu = -(d2f + df / r - m * m * f / (r * r)) +
                    2.0 * m * at * f / r + at * at * f + v_derived(r) * f;
  return std::abs(hu - lambda_ * f);
}

double ManufacturedEigenpair::max_equation_residual(double r_hi, int n) const {
  double worst = 0.0;
  for (int i = 1; i <= n; ++i)
    worst = std::max(worst, eigen_equation_residual(r_hi * i / n));
  return worst;
}

PotentialModel decompose(const ManufacturedEigenpair& pair, DecompChoice choice,
                         double split_radius) {
  auto p = std::make_shared<ManufacturedEigenpair>(pair);
  RadialFn v = [p](double r) { return p->v_derived(r); };
  RadialFn dv = [p](double r) { return p->dv_derived(r); };
  switch (choice) {
    case DecompChoice::all_v1: {
      RadialFn d = [p](double r) {
        return p->v_derived(r) + r * p->dv_derived(r);  // d/dr (r V)
      };
      return PotentialModel(v, {}, {}, d);
    }
    case DecompChoice::all_v2:
      return PotentialModel({}, v, {});
    case DecompChoice::split: {
      // C^1 smoothstep over width 1e-3 at the split radius
      const double w = 5e-4, r0 = split_radius;
      auto s = [=](double r) {
        if (r <= r0 - w) return 1.0;
        if (r >= r0 + w) return 0.0;
        const double t = (r - (r0 - w)) / (2.0 * w);
        return 1.0 - t * t * (3.0 - 2.0 * t);
      };
      auto ds = [=](double r) {
        if (r <= r0 - w || r >= r0 + w) return 0.0;
        const double t = (r - (r0 - w)) / (2.0 * w);
        return -(6.0 * t * (1.0 - t)) / (2.0 * w);
      };
      RadialFn v1 = [=](double r) { return s(r) * v(r); };
      RadialFn v2 = [=](double r) { return (1.0 - s(r)) * v(r); };
      RadialFn d = [=](double r) {
        return s(r) * v(r) + r * (ds(r) * v(r) + s(r) * dv(r));
      };
      return PotentialModel(v1, v2, {}, d);
    }
  }
  throw std::logic_error("decompose: unknown choice");
}

RadialQuadrature::RadialQuadrature(int n, double r_split, double r_max)
    : r_max_(r_max) {
  if (n < 8 || !(r_split > 0.0) || !(r_max > r_split))
    throw std::invalid_argument("RadialQuadrature: bad parameters");
  const int n1 = n / 2, n2 = n - n / 2;
  nodes_.reserve(n1 + n2 + 1);
  for (int i = 0; i <= n1; ++i) nodes_.push_back(r_split * i / n1);
  for (int i = 1; i <= n2; ++i)
    nodes_.push_back(r_split + (r_max - r_split) * i / n2);
  const std::size_t nn = nodes_.size();
  weights_.assign(nn, 0.0);
  weights_[0] = 0.5 * (nodes_[1] - nodes_[0]);
  weights_[nn - 1] = 0.5 * (nodes_[nn - 1] - nodes_[nn - 2]);
  for (std::size_t i = 1; i + 1 < nn; ++i)
    weights_[i] = 0.5 * (nodes_[i + 1] - nodes_[i - 1]);
}

double RadialQuadrature::integrate(const std::function<double(double)>& g) const {
  double s = 0.0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) s += weights_[i] * g(nodes_[i]);
  return 2.0 * M_PI * s;
}

G1Choice G1Choice::one() {
  return {[](double) { return 1.0; }, [](double) { return 0.0; },
          [](double) { return 0.0; }, "one"};
}

G1Choice G1Choice::radial_r() {
  // Delta r = 1/r in 2D; the integrand fold handles the r = 0 limit
  return {[](double r) { return r; }, [](double) { return 1.0; },
          [](double r) { return 1.0 / r; }, "r"};
}

namespace {

struct PairFns {
  const ManufacturedEigenpair& p;
  double f(double r) const { return p.f(r); }
  double df(double r) const { return p.df(r); }
  // |grad_A u|^2 * r with the Jacobian folded (finite at r = 0)
  double grad2_jac(double r) const {
    const double m = p.m();
    if (r == 0.0) return 0.0;
    const double ang = m / r + p.a_theta(r);
    const double fr = f(r);
    return (df(r) * df(r) + ang * ang * fr * fr) * r;
  }
  // -2 Im int r B*_tau . u conj(grad_A u) integrand * r, i.e.
  // 2 B (m + r a_theta) f^2 * r  (finite at r = 0)
  double bstar_jac(double r) const {
    const double fr = f(r);
    return 2.0 * p.b_field(r) * (p.m() + r * p.a_theta(r)) * fr * fr * r;
  }
  double v(double r) const { return p.v_derived(r); }
};

}  // namespace

IdentityResidual residual_G1(const ManufacturedEigenpair& pair,
                             const G1Choice& g1, const RadialQuadrature& quad) {
  PairFns u{pair};
  IdentityResidual out;
  out.identity = "G1[" + g1.name + "]";
  out.n_quad = quad.n();

  const double t_lam = pair.lambda() == 0.0
                           ? 0.0
                           : pair.lambda() * quad.integrate([&](double r) {
                               return g1.g(r) * u.f(r) * u.f(r) * r;
                             });
  const double t_grad =
      quad.integrate([&](double r) { return g1.g(r) * u.grad2_jac(r); });
  const double t_lap = quad.integrate([&](double r) {
    // (Lap G1) f^2 r has the finite limit G1'(0) f(0)^2 at the origin
    if (r == 0.0) return g1.dg(0.0) * u.f(0.0) * u.f(0.0);
    return g1.lap(r) * u.f(r) * u.f(r) * r;
  });
  const double t_v = quad.integrate([&](double r) {
    if (r == 0.0) return 0.0;
    return g1.g(r) * u.v(r) * u.f(r) * u.f(r) * r;
  });

  out.terms = {{"re_lambda_int_G1_u2", t_lam},
               {"int_G1_grad2", t_grad},
               {"half_int_lapG1_u2", 0.5 * t_lap},
               {"int_G1_ReV_u2", t_v}};
  out.lhs = t_lam - t_grad + 0.5 * t_lap;
  out.rhs = t_v;
  out.abs_residual = std::abs(out.lhs - out.rhs);
  out.rel_residual =
      out.abs_residual / (std::abs(out.lhs) + std::abs(out.rhs) + 1e-30);
  return out;
}

IdentityResidual residual_G2(const ManufacturedEigenpair& pair,
                             const G1Choice& g2, const RadialQuadrature& quad) {
  PairFns u{pair};
  IdentityResidual out;
  out.identity = "G2[" + g2.name + "]";
  out.n_quad = quad.n();

  // Im(lambda) = 0 for manufactured pairs; grad G2 . conj(u) grad_A u is the
  // real radial pairing G2' f f', so its imaginary part vanishes; Im V = 0.
  const double radial_pairing = quad.integrate(
      [&](double r) { return g2.dg(r) * u.f(r) * u.df(r) * r; });
  out.terms = {{"im_lambda_int_G2_u2", 0.0},
               {"im_int_gradG2_u_gradAu", 0.0},
               {"re_radial_pairing_diagnostic", radial_pairing},
               {"int_G2_ImV_u2", 0.0}};
  out.lhs = 0.0;
  out.rhs = 0.0;
  out.abs_residual = 0.0;
  out.rel_residual = 0.0;
  return out;
}

IdentityResidual residual_G3(const ManufacturedEigenpair& pair,
                             const RadialQuadrature& quad) {
  PairFns u{pair};
  IdentityResidual out;
  out.identity = "G3[|x|^2]";
  out.n_quad = quad.n();

  const double t_hess = 2.0 * quad.integrate([&](double r) { return u.grad2_jac(r); });
  const double t_bstar = -quad.integrate([&](double r) { return u.bstar_jac(r); });
  const double rhs_lap = -2.0 * quad.integrate([&](double r) {
    if (r == 0.0) return 0.0;
    return u.v(r) * u.f(r) * u.f(r) * r;
  });
  const double rhs_rad = -2.0 * quad.integrate([&](double r) {
    if (r == 0.0) return 0.0;
    return r * u.v(r) * u.f(r) * u.df(r) * r;
  });

  out.terms = {{"int_gradAu_hessG3_gradAu", t_hess},
               {"quarter_int_bilapG3_u2", 0.0},
               {"im_lambda_term", 0.0},
               {"im_int_gradG3_Bstar_u_gradAu", t_bstar},
               {"minus_half_int_lapG3_ReV_u2", rhs_lap},
               {"minus_re_int_gradG3_V_u_gradAu", rhs_rad}};
  out.lhs = t_hess + t_bstar;
  out.rhs = rhs_lap + rhs_rad;
  out.abs_residual = std::abs(out.lhs - out.rhs);
  out.rel_residual =
      out.abs_residual / (std::abs(out.lhs) + std::abs(out.rhs) + 1e-30);
  return out;
}

IdentityResidual residual_crucial_ss(const ManufacturedEigenpair& pair,
                                     const PotentialModel& decomposition,
                                     const RadialQuadrature& quad) {
  PairFns u{pair};
  IdentityResidual out;
  out.identity = "crucial_ss";
  out.n_quad = quad.n();

  const double lhs = quad.integrate([&](double r) { return u.grad2_jac(r); });
  const double t_b = quad.integrate([&](double r) { return u.bstar_jac(r); });
  const double t_v1 = quad.integrate([&](double r) {
    if (r == 0.0) return 0.0;
    return decomposition.dr_rv1(r) * u.f(r) * u.f(r) * r;
  });
  const double t_v2a = -quad.integrate([&](double r) {  // (1 - d) at d = 2
    if (r == 0.0) return 0.0;
    return decomposition.v2(r) * u.f(r) * u.f(r) * r;
  });
  const double t_v2b = -2.0 * quad.integrate([&](double r) {
    if (r == 0.0) return 0.0;
    return r * decomposition.v2(r) * u.f(r) * u.df(r) * r;
  });

  out.terms = {{"int_grad2", lhs},
               {"minus2_im_int_rBstar_u_gradAu", t_b},
               {"int_dr_rV1_u2", t_v1},
               {"one_minus_d_int_V2_u2", t_v2a},
               {"minus2_re_int_rV2_u_drAu", t_v2b}};
  out.lhs = lhs;
  out.rhs = t_b + t_v1 + t_v2a + t_v2b;
  out.abs_residual = std::abs(out.lhs - out.rhs);
  out.rel_residual =
      out.abs_residual / (std::abs(out.lhs) + std::abs(out.rhs) + 1e-30);
  return out;
}

GridFunction phase_shift(const GridFunction& u, cplx lambda) {
  if (lambda.real() < 0.0)
    throw std::invalid_argument("phase_shift: requires Re lambda >= 0");
  const double sgn =
      lambda.imag() > 0.0 ? 1.0 : (lambda.imag() < 0.0 ? -1.0 : 0.0);
  const double k = sgn * std::sqrt(lambda.real());
  GridFunction out(u.grid());
  for (int idx = 0; idx < u.size(); ++idx) {
    const double r = u.grid().point(idx).r;
    out[idx] = std::polar(1.0, -k * r) * u[idx];
  }
  return out;
}

ConvergenceStudy refinement_study(
    const std::function<IdentityResidual(const RadialQuadrature&)>& eval,
    std::vector<int> ns, double r_split, double r_max) {
  ConvergenceStudy st;
  st.ns = std::move(ns);
  for (int n : st.ns) {
    RadialQuadrature q(n, r_split, r_max);
    st.residuals.push_back(eval(q).abs_residual);
  }
  for (std::size_t i = 0; i + 1 < st.residuals.size(); ++i)
    st.orders.push_back(std::log2(st.residuals[i] /
                                  std::max(st.residuals[i + 1], 1e-300)));
  return st;
}

std::vector<IdentityTerm> bracket_terms_report(const ManufacturedEigenpair& pair,
                                               cplx lambda,
                                               const RadialQuadrature& quad) {
  PairFns u{pair};
  const double re = std::max(lambda.real(), 0.0);
  // |grad_A u^-|^2 = f'^2 + Re(lambda) f^2 + angular part, for radial real f
  auto grad_shift_jac = [&](double r) {
    if (r == 0.0) return 0.0;
    const double m = pair.m();
    const double ang = m / r + pair.a_theta(r);
    const double fr = u.f(r);
    return (u.df(r) * u.df(r) + re * fr * fr + ang * ang * fr * fr) * r;
  };
  const double int_r_grad =
      quad.integrate([&](double r) { return r * grad_shift_jac(r); });
  const double int_over_r =
      quad.integrate([&](double r) { return u.f(r) * u.f(r); });
  const double int_r_revplus = quad.integrate([&](double r) {
    if (r == 0.0) return 0.0;
    return r * std::max(u.v(r), 0.0) * u.f(r) * u.f(r) * r;
  });
  const double pref =
      re > 0.0 ? std::abs(lambda.imag()) / std::sqrt(re) : 0.0;
  return {{"prefactor_imlam_over_sqrt_relam", pref},
          {"int_r_grad_shifted2", int_r_grad},
          {"half_int_u2_over_r", 0.5 * int_over_r},
          {"int_r_ReVplus_u2", int_r_revplus}};
}

}  // namespace absentia
