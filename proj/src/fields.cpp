#include "absentia/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

namespace absentia {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double eval_poly(const std::vector<double>& c, double r) {
  double v = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) v = v * r + c[k];
  return v;
}

// int_lo^r s * p(s) ds for p with coefficients c (exact antiderivative)
double poly_flux_increment(const std::vector<double>& c, double lo, double r) {
  double v = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double p = static_cast<double>(k) + 2.0;
    v += c[k] / p * (std::pow(r, p) - std::pow(lo, p));
  }
  return v;
}

}  // namespace

RadialFieldProfile::RadialFieldProfile(std::vector<PolyPiece> pieces)
    : pieces_(std::move(pieces)) {
  if (pieces_.empty()) return;
  double expect_lo = 0.0;
  for (const PolyPiece& p : pieces_) {
    if (!(p.lo == expect_lo) || !(p.hi > p.lo))
      throw std::invalid_argument(
          "RadialFieldProfile: pieces must partition [0, support_radius)");
    for (double c : p.coef)
      if (!std::isfinite(c))
        throw std::invalid_argument(
            "RadialFieldProfile: non-finite coefficient, r*B(r) not locally "
            "integrable");
    expect_lo = p.hi;
  }
  support_radius_ = pieces_.back().hi;
}

double RadialFieldProfile::operator()(double r) const {
  if (r < 0.0 || r >= support_radius_) return 0.0;
  // pieces are few; linear scan is fine
  for (const PolyPiece& p : pieces_)
    if (r < p.hi) return eval_poly(p.coef, r);
  return 0.0;
}

RadialFieldProfile RadialFieldProfile::step(double b0, double r0) {
  if (!(r0 > 0.0)) throw std::invalid_argument("step field: r0 must be > 0");
  return RadialFieldProfile({PolyPiece{0.0, r0, {b0}}});
}

RadialFieldProfile RadialFieldProfile::constant(double b0) {
  return RadialFieldProfile({PolyPiece{0.0, kInf, {b0}}});
}

RadialFieldProfile RadialFieldProfile::gaussian_poly(double b0, double sigma,
                                                     int n_pieces, int degree) {
  if (!(sigma > 0.0) || n_pieces < 1 || degree < 1)
    throw std::invalid_argument("gaussian_poly: bad parameters");
  const double r_cut = 5.0 * sigma;
  const double h = r_cut / n_pieces;
  std::vector<PolyPiece> pieces;
  pieces.reserve(n_pieces);
  for (int i = 0; i < n_pieces; ++i) {
    const double lo = i * h, hi = (i + 1) * h;
    // interpolate at Chebyshev points of the segment
    const int m = degree + 1;
    Eigen::MatrixXd V(m, m);
    Eigen::VectorXd f(m);
    for (int q = 0; q < m; ++q) {
      const double t = std::cos(M_PI * (q + 0.5) / m);
      const double r = 0.5 * (lo + hi) + 0.5 * (hi - lo) * t;
      double pw = 1.0;
      for (int k = 0; k < m; ++k) { V(q, k) = pw; pw *= r; }
      f(q) = b0 * std::exp(-(r / sigma) * (r / sigma));
    }
    Eigen::VectorXd c = V.fullPivLu().solve(f);
    pieces.push_back(PolyPiece{lo, hi, {c.data(), c.data() + m}});
  }
  return RadialFieldProfile(std::move(pieces));
}

FluxFunction flux_profile(const RadialFieldProfile& field) {
  FluxFunction out;
  out.field_ = field;
  double acc = 0.0;
  for (const PolyPiece& p : field.pieces()) {
    out.phi_at_lo_.push_back(acc);
    if (std::isfinite(p.hi)) acc += poly_flux_increment(p.coef, p.lo, p.hi);
  }
  if (std::isfinite(field.support_radius())) out.total_flux_ = acc;
  return out;
}

double FluxFunction::operator()(double r) const {
  if (r <= 0.0 || field_.pieces().empty()) return 0.0;
  const auto& pieces = field_.pieces();
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (r < pieces[i].hi)
      return phi_at_lo_[i] + poly_flux_increment(pieces[i].coef, pieces[i].lo, r);
  }
  return total_flux_ ? *total_flux_ : 0.0;
}

double FluxFunction::derivative(double r) const { return r * field_(r); }

double flux_distance(double mean_flux) {
  const double frac = mean_flux - std::floor(mean_flux);
  return std::min(frac, 1.0 - frac);
}

AngularFluxDensity::AngularFluxDensity(double mean, std::vector<double> cos_coef,
                                       std::vector<double> sin_coef)
    : mean_(mean), cos_(std::move(cos_coef)), sin_(std::move(sin_coef)) {
  sin_.resize(std::max(sin_.size(), cos_.size()), 0.0);
  cos_.resize(sin_.size(), 0.0);
  if (!std::isfinite(mean_))
    throw std::invalid_argument("AngularFluxDensity: mean flux must be finite");
}

double AngularFluxDensity::operator()(double theta) const {
  double v = mean_;
  for (std::size_t k = 0; k < cos_.size(); ++k) {
    const double kt = (k + 1) * theta;
    v += cos_[k] * std::cos(kt) + sin_[k] * std::sin(kt);
  }
  return v;
}

double AngularFluxDensity::flux_distance() const {
  return absentia::flux_distance(mean_);
}

double AngularFluxDensity::integral(double t0, double t1) const {
  double v = mean_ * (t1 - t0);
  for (std::size_t k = 0; k < cos_.size(); ++k) {
    const double kk = static_cast<double>(k + 1);
    v += cos_[k] / kk * (std::sin(kk * t1) - std::sin(kk * t0));
    v -= sin_[k] / kk * (std::cos(kk * t1) - std::cos(kk * t0));
  }
  return v;
}

VectorPotentialField VectorPotentialField::zero() {
  return transverse_gauge(RadialFieldProfile::zero());
}

Eigen::Vector2d VectorPotentialField::operator()(double x, double y) const {
  Eigen::Vector2d a = Eigen::Vector2d::Zero();
  const double r2 = x * x + y * y;
  switch (tag_) {
    case GaugeTag::transverse_radial:
      // A = (-y, x) Phi(r)/r^2; removable at the origin (Phi ~ B(0) r^2 / 2)
      if (r2 > 0.0) {
        const double f = (*flux_)(std::sqrt(r2)) / r2;
        a = Eigen::Vector2d(-y * f, x * f);
      }
      break;
    case GaugeTag::aharonov_bohm: {
      if (r2 == 0.0)
        throw std::domain_error("AB potential is singular at the origin");
      const double al = (*alpha_)(std::atan2(y, x));
      a = Eigen::Vector2d(-y, x) * (al / r2);
      break;
    }
    case GaugeTag::explicit_field:
      a = explicit_(x, y);
      break;
  }
  if (grad_chi_) a += grad_chi_(x, y);
  return a;
}

bool VectorPotentialField::gauge_trivial() const {
  return tag_ == GaugeTag::aharonov_bohm && alpha_->flux_distance() == 0.0;
}

double VectorPotentialField::radial_link(double r0, double r1, double theta) const {
  double v = 0.0;
  if (tag_ == GaugeTag::explicit_field) {
    const double rm = 0.5 * (r0 + r1);
    const Eigen::Vector2d dir(std::cos(theta), std::sin(theta));
    v = explicit_(rm * dir[0], rm * dir[1]).dot(dir) * (r1 - r0);
  }
  // transverse and AB gauges are tangential: A . dl = 0 along rays
  if (chi_)
    v += chi_(r1 * std::cos(theta), r1 * std::sin(theta)) -
         chi_(r0 * std::cos(theta), r0 * std::sin(theta));
  return v;
}

double VectorPotentialField::angular_link(double r, double theta0,
                                          double theta1) const {
  double v = 0.0;
  switch (tag_) {
    case GaugeTag::transverse_radial:
      v = (*flux_)(r) * (theta1 - theta0);
      break;
    case GaugeTag::aharonov_bohm:
      v = alpha_->integral(theta0, theta1);
      break;
    case GaugeTag::explicit_field: {
      const double tm = 0.5 * (theta0 + theta1);
      const Eigen::Vector2d tang(-std::sin(tm), std::cos(tm));
      v = explicit_(r * std::cos(tm), r * std::sin(tm)).dot(tang) * r *
          (theta1 - theta0);
      break;
    }
  }
  if (chi_)
    v += chi_(r * std::cos(theta1), r * std::sin(theta1)) -
         chi_(r * std::cos(theta0), r * std::sin(theta0));
  return v;
}

VectorPotentialField VectorPotentialField::with_gauge_shift(
    std::function<double(double, double)> chi,
    std::function<Eigen::Vector2d(double, double)> grad_chi) const {
  VectorPotentialField out = *this;
  if (chi_) throw std::invalid_argument("gauge shift already applied");
  out.chi_ = std::move(chi);
  out.grad_chi_ = std::move(grad_chi);
  return out;
}

VectorPotentialField transverse_gauge(const RadialFieldProfile& field) {
  VectorPotentialField a;
  a.tag_ = GaugeTag::transverse_radial;
  a.flux_ = flux_profile(field);
  a.origin_singular_ = false;  // Phi_B(r)/r -> 0 for locally integrable B
  return a;
}

VectorPotentialField ab_potential(const AngularFluxDensity& alpha) {
  VectorPotentialField a;
  a.tag_ = GaugeTag::aharonov_bohm;
  a.alpha_ = alpha;
  a.origin_singular_ = true;
  return a;
}

VectorPotentialField explicit_potential(
    std::function<Eigen::Vector2d(double, double)> fn) {
  VectorPotentialField a;
  a.tag_ = GaugeTag::explicit_field;
  a.explicit_ = std::move(fn);
  return a;
}

PotentialModel::PotentialModel(RadialFn v1, RadialFn v2, RadialFn im_v,
                               std::optional<RadialFn> dr_rv1)
    : v1_(std::move(v1)), v2_(std::move(v2)), im_(std::move(im_v)),
      dr_rv1_(std::move(dr_rv1)) {}

double PotentialModel::dr_rv1(double r) const {
  if (!v1_) return 0.0;
  if (dr_rv1_) return (*dr_rv1_)(r);
  double h = 1e-5 * (1.0 + r);
  if (r < h) h = std::max(r, 1e-12);  // keep the stencil inside r >= 0
  const double rp = r + h, rm = r - h;
  return (rp * v1_(rp) - rm * v1_(rm)) / (2.0 * h);
}

PotentialModel well_potential(double depth, double radius, bool as_v2,
                              RadialFn im) {
  RadialFn well = [depth, radius](double r) { return r <= radius ? -depth : 0.0; };
  if (as_v2) return PotentialModel({}, well, std::move(im));
  // V1 route: jump at the edge ignored in the analytic derivative
  RadialFn d = [depth, radius](double r) { return r <= radius ? -depth : 0.0; };
  return PotentialModel(well, {}, std::move(im), d);
}

}  // namespace absentia
