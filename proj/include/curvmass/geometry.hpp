#pragma once

// Rotationally symmetric 3-metrics  g = dr^2/phi(r) + r^2 g_{S^2}  described
// by the profile function phi on [0, r_max] (or [cap_radius, r_max] for the
// capped Schwarzschild-de Sitter family), plus their curvature, horizons and
// the margin of the dominant energy condition R - 2*Lambda >= 0.

#include <array>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace curvmass {

enum class ProfileKind {
  de_sitter,
  schwarzschild_de_sitter_capped,
  constant_curvature,
  perturbed,
  tabulated,
};

enum class BoundaryKind {
  equator,  // phi(r_max) = 0, simple zero (minimal boundary sphere)
  wall,     // phi(r_max) > 0
};

// Profiles carry analytic derivatives; curvature never finite-differences
// phi (the 1/r^2 amplification near the pole punishes that).
class RadialProfile {
 public:
  static RadialProfile de_sitter(double lambda);
  // phi = 1 - lambda r^2/3 - 2m/r on [R-, R+], hemispherical cap metadata at R-.
  static RadialProfile schwarzschild_de_sitter_capped(double lambda, double m);
  // phi = 1 - a r^2 on [0, min(1/sqrt(a), r_cap)]
  static RadialProfile constant_curvature(double a, double r_cap = 0.0);
  // phi = (1 - lambda r^2/3) (1 + eps * shape(r)) with the bump shape
  // shape(r) = (r/sigma)^2 exp(1 - (r/sigma)^2)   (shape(0)=0, shape'(0)=0).
  static RadialProfile perturbed(double lambda, double eps, double sigma);
  // cubic-spline profile through strictly increasing samples; first row must
  // be (0, 1), phi > 0 in the interior.
  static RadialProfile tabulated(std::vector<double> r, std::vector<double> phi);
  // CSV with header "r,phi".
  static RadialProfile from_csv(const std::string& path);

  double phi(double r) const;
  double dphi(double r) const;
  // phi(r_max - gap) in a form with no cancellation at small gap.
  double phi_gap(double gap) const;
  // phi evaluated through phi_gap near an equator boundary.
  double phi_stable(double r) const;
  // Taylor coefficients of phi about r = 0: {1, 0, c2, c3, c4}.
  std::array<double, 5> taylor0() const;

  double r_max() const { return r_max_; }
  ProfileKind kind() const { return kind_; }
  BoundaryKind boundary_kind() const { return boundary_; }
  // sds only: black-hole horizon radius R- where the cap is attached
  double cap_radius() const;
  double inner_radius() const;  // 0, or R- for the capped family
  std::string describe() const;

 private:
  RadialProfile() = default;

  ProfileKind kind_{};
  BoundaryKind boundary_{};
  double r_max_ = 0;
  double lambda_ = 0;  // de_sitter / sds / perturbed
  double m_ = 0;       // sds
  double cap_radius_ = 0;
  double a_ = 0;       // constant_curvature
  double eps_ = 0;     // perturbed
  double sigma_ = 0;
  std::shared_ptr<const struct SplineData> spline_;
};

// Scalar curvature of the warped-product metric, R(r) = 2(1 - phi - r phi')/r^2;
// below r = 1e-3 r_max the Taylor form -2(3 c2 + 4 c3 r + 5 c4 r^2) is used.
double scalar_curvature(const RadialProfile& profile, double r);

// Mean curvature H(r) = (2/r) sqrt(phi(r)) of the centered sphere of radius r,
// with respect to the outward (increasing-r) unit normal.
double mean_curvature(const RadialProfile& profile, double r);

// min over a sample grid (plus the r -> 0 limit) of R(r) - 2*lambda.
// Negative values flag a violation of the dominant energy condition; this is
// a diagnostic, not an exception.
double dec_margin(const RadialProfile& profile, double lambda, std::size_t samples);

// The two positive roots of P(r) = r - (lambda/3) r^3 - 2m, refined until
// phi(R+-) <= 1e-12.  Throws when m is outside (0, (1/3) lambda^{-1/2}).
std::pair<double, double> sds_horizon_radii(double lambda, double m);

// The pair (Lambda, p) with the derived constants of the reference model.
struct ModelParams {
  double lambda = 0;
  double p = 2;
  double r_lambda = 0;  // sqrt(3/lambda) for lambda > 0, NaN otherwise
  double t_lambda = 0;  // log(3/lambda)  for lambda > 0, NaN otherwise
};

ModelParams make_model_params(double lambda, double p);

}  // namespace curvmass
