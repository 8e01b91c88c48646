#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace absentia {

/// One polynomial segment of a radial field profile:
/// B(r) = sum_k coef[k] r^k on [lo, hi).
struct PolyPiece {
  double lo = 0.0;
  double hi = 0.0;  // may be +inf for the last piece
  std::vector<double> coef;
};

/// Radial magnetic field B(r) as piecewise polynomial with exact
/// antiderivatives, so flux values carry no quadrature error. Pieces must
/// partition [0, support_radius); B == 0 outside.
class RadialFieldProfile {
 public:
  RadialFieldProfile() = default;  // B == 0, empty support
  explicit RadialFieldProfile(std::vector<PolyPiece> pieces);

  static RadialFieldProfile zero() { return RadialFieldProfile(); }
  static RadialFieldProfile step(double b0, double r0);
  static RadialFieldProfile constant(double b0);
  /// Piecewise-polynomial interpolation of b0 * exp(-(r/sigma)^2),
  /// truncated at 5*sigma.
  static RadialFieldProfile gaussian_poly(double b0, double sigma,
                                          int n_pieces = 24, int degree = 3);

  double operator()(double r) const;
  double support_radius() const { return support_radius_; }
  bool is_zero() const { return pieces_.empty(); }
  const std::vector<PolyPiece>& pieces() const { return pieces_; }

 private:
  std::vector<PolyPiece> pieces_;
  double support_radius_ = 0.0;
};

/// Magnetic flux through the disk of radius r,
/// Phi_B(r) = int_0^r B(s) s ds, evaluated exactly per polynomial piece.
class FluxFunction {
 public:
  FluxFunction() = default;
  double operator()(double r) const;
  double derivative(double r) const;  // = r * B(r)
  /// Limit of Phi_B at infinity; set only when the field support is bounded.
  std::optional<double> total_flux() const { return total_flux_; }

 private:
  friend FluxFunction flux_profile(const RadialFieldProfile&);
  RadialFieldProfile field_;
  std::vector<double> phi_at_lo_;  // cumulative flux at each piece start
  std::optional<double> total_flux_;
};

FluxFunction flux_profile(const RadialFieldProfile& field);

/// dist(t, Z), always in [0, 1/2].
double flux_distance(double mean_flux);

/// Aharonov-Bohm angular flux density alpha(theta) as a short trigonometric
/// series: alpha = mean + sum_k (cos_coef[k-1] cos(k theta) + sin_coef[k-1] sin(k theta)).
class AngularFluxDensity {
 public:
  explicit AngularFluxDensity(double mean, std::vector<double> cos_coef = {},
                              std::vector<double> sin_coef = {});

  double operator()(double theta) const;
  double mean_flux() const { return mean_; }
  double flux_distance() const;  // beta
  /// Exact line-integral of alpha over [t0, t1].
  double integral(double t0, double t1) const;
  int n_harmonics() const { return static_cast<int>(cos_.size()); }
  double cos_coef(int k) const { return cos_.at(k - 1); }
  double sin_coef(int k) const { return sin_.at(k - 1); }

 private:
  double mean_ = 0.0;
  std::vector<double> cos_, sin_;
};

enum class GaugeTag { transverse_radial, aharonov_bohm, explicit_field };

/// A vector potential together with the exact (or midpoint) line integrals
/// the link-variable discretization needs. Immutable after construction.
class VectorPotentialField {
 public:
  static VectorPotentialField zero();

  Eigen::Vector2d operator()(double x, double y) const;
  Eigen::Vector2d operator()(const Eigen::Vector2d& x) const {
    return (*this)(x[0], x[1]);
  }

  GaugeTag gauge_tag() const { return tag_; }
  bool origin_singular() const { return origin_singular_; }
  /// AB potential with integer mean flux: unitarily removable.
  bool gauge_trivial() const;

  /// int A . dl along the ray theta = const from r0 to r1.
  double radial_link(double r0, double r1, double theta) const;
  /// int A . dl along the arc r = const from theta0 to theta1.
  double angular_link(double r, double theta0, double theta1) const;

  /// Potential A + grad(chi); link integrals gain chi(b) - chi(a) exactly.
  VectorPotentialField with_gauge_shift(
      std::function<double(double, double)> chi,
      std::function<Eigen::Vector2d(double, double)> grad_chi) const;

  const FluxFunction* flux() const { return flux_ ? &*flux_ : nullptr; }
  const AngularFluxDensity* alpha() const { return alpha_ ? &*alpha_ : nullptr; }

 private:
  friend VectorPotentialField transverse_gauge(const RadialFieldProfile&);
  friend VectorPotentialField ab_potential(const AngularFluxDensity&);
  friend VectorPotentialField explicit_potential(
      std::function<Eigen::Vector2d(double, double)>);

  GaugeTag tag_ = GaugeTag::transverse_radial;
  bool origin_singular_ = false;
  std::optional<FluxFunction> flux_;
  std::optional<AngularFluxDensity> alpha_;
  std::function<Eigen::Vector2d(double, double)> explicit_;
  std::function<double(double, double)> chi_;
  std::function<Eigen::Vector2d(double, double)> grad_chi_;
};

/// A(x) = (-x2, x1) Phi_B(|x|)/|x|^2; curl A = B identically, x . A = 0.
VectorPotentialField transverse_gauge(const RadialFieldProfile& field);
/// A(x) = (-sin t, cos t) alpha(t)/r; singular at the origin.
VectorPotentialField ab_potential(const AngularFluxDensity& alpha);
/// Arbitrary potential; link integrals by the midpoint rule.
VectorPotentialField explicit_potential(
    std::function<Eigen::Vector2d(double, double)> a);

using RadialFn = std::function<double(double)>;

/// Electric potential V = V1 + V2 + i ImV (all radial) with the derived
/// weights of the certification conditions. d/dr(r V1) comes from the
/// supplied analytic derivative when available, otherwise from central
/// differences with step 1e-5 (1 + r); which one was used is reported.
class PotentialModel {
 public:
  PotentialModel() = default;  // V == 0
  PotentialModel(RadialFn v1, RadialFn v2, RadialFn im_v,
                 std::optional<RadialFn> dr_rv1 = {});

  static PotentialModel zero() { return PotentialModel(); }

  double v1(double r) const { return v1_ ? v1_(r) : 0.0; }
  double v2(double r) const { return v2_ ? v2_(r) : 0.0; }
  double im(double r) const { return im_ ? im_(r) : 0.0; }
  double re(double r) const { return v1(r) + v2(r); }
  double re_plus(double r) const { return std::max(re(r), 0.0); }
  double re_minus(double r) const { return std::max(-re(r), 0.0); }

  double dr_rv1(double r) const;
  bool dr_rv1_analytic() const { return static_cast<bool>(dr_rv1_); }

  bool is_zero() const { return !v1_ && !v2_ && !im_; }
  bool has_im() const { return static_cast<bool>(im_); }

  // weights entering the subordination conditions
  double w_v_minus(double r) const { return re_minus(r); }
  double w_dr_rv1_plus(double r) const { return std::max(dr_rv1(r), 0.0); }
  double w_abs_v2(double r) const { return std::abs(v2(r)); }
  double w_4r2_v2sq(double r) const { double v = v2(r); return 4.0 * r * r * v * v; }
  double w_abs_im(double r) const { return std::abs(im(r)); }
  double w_4r2_imsq(double r) const { double v = im(r); return 4.0 * r * r * v * v; }
  double w_4r2_im(double r) const { return 4.0 * r * r * std::abs(im(r)); }
  double w_r2_reminus_sq(double r) const {
    double v = re_minus(r);
    return r * r * v * v;
  }

 private:
  RadialFn v1_, v2_, im_;
  std::optional<RadialFn> dr_rv1_;
};

/// Compactly supported well -depth * 1_{r <= radius}. Placed in V2 by
/// default (the jump at the edge is not W^{1,1}); as_v1 = true puts it in V1
/// with the jump ignored in the analytic derivative.
PotentialModel well_potential(double depth, double radius, bool as_v2 = true,
                              RadialFn im = {});

}  // namespace absentia
