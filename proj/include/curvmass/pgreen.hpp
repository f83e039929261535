#pragma once

// Radial p-Green's functions u with pole at the rotational center,
//   u(r) = int_r^{r_max} rho^{-2/(p-1)} / sqrt(phi(rho)) d rho,
// normalized so that Delta_p u = -4 pi delta_pole with u = 0 at r_max,
// their level-set variable w = -(p-1) log u and the inversion r(t) of w.
//
// The tail integral is cached on a fixed panel grid at construction;
// afterwards every evaluator is const and safe to share across threads.
// Near the pole (r < 1e-3 r_max) the quadrature is replaced by a termwise
// integrated series built from the Taylor coefficients of phi, which keeps
// full relative accuracy where rho^{-2/(p-1)} spans hundreds of orders of
// magnitude.  Near an equator boundary the inversion is carried out in the
// gap variable r_max - r, which stays meaningful long after r itself rounds
// to r_max.

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "curvmass/geometry.hpp"

namespace curvmass {

class RadialGreen {
 public:
  // The capped Schwarzschild-de Sitter profile is rejected: the metric is
  // merely Lipschitz at the gluing sphere and is served only by the
  // 1-harmonic mass path.
  RadialGreen(RadialProfile profile, double p);

  const RadialProfile& profile() const { return profile_; }
  double p() const { return p_; }
  double r_max() const { return profile_.r_max(); }

  double u(double r) const;
  double log_u(double r) const;
  double w(double r) const;  // -(p-1) log u, strictly increasing
  double grad_norm_u(double r) const { return std::exp(-2.0 * q_ * std::log(r)); }
  // (w, |grad w|) with |grad w| = (p-1) r^{-2/(p-1)} / u(r)
  std::pair<double, double> w_and_grad(double r) const;

  struct Level {
    double t = 0;
    double r = 0;
    double log_r = 0;
    // r_max - r for levels in the boundary zone, NaN elsewhere; exact even
    // when r itself has rounded to r_max.  log_gap stays finite after gap
    // itself underflows (gap ~ e^{-2t/(p-1)} leaves double range long before
    // the level data does).
    double gap = std::numeric_limits<double>::quiet_NaN();
    double log_gap = std::numeric_limits<double>::quiet_NaN();
    bool in_boundary_zone() const { return !std::isnan(log_gap); }
  };

  Level level_at(double t) const;
  Level level_at(double t, const Level& hint) const;
  double radius_of_level(double t) const { return level_at(t).r; }

  // quantities on the level set {w = t}; these use u = e^{-t/(p-1)} exactly
  double grad_w_at(const Level& lv) const;
  double log_grad_w_at(const Level& lv) const;
  double phi_at(const Level& lv) const;
  double mean_curvature_at(const Level& lv) const;
  // log u recomputed by integration at the level's radius (gap-aware); feeds
  // the flux-identity check, which would be a tautology if it reused
  // -t/(p-1) directly
  double log_u_recomputed_at(const Level& lv) const;

 private:
  double u_from_gap(double gap) const;
  double u_panels(double r) const;          // u(r) for r in [r_series, 0.9 r_max]
  double series_log_u(double log_r) const;  // log u below the series threshold
  double dlogu_dlogr(double log_r, double log_u_val) const;

  RadialProfile profile_;
  double p_ = 2;
  double q_ = 1;        // 1/(p-1)
  double e0_ = -1;      // 1 - 2q < 0
  double r_series_ = 0;  // 1e-3 r_max
  double boundary_zone_r_ = 0;  // 0.9 r_max
  // ascending panel nodes r_series = x_0 < ... < x_N = 0.9 r_max with u(x_i)
  std::vector<double> node_r_;
  std::vector<double> node_u_;
  double g_[5] = {1, 0, 0, 0, 0};  // Taylor of 1/sqrt(phi) at 0
  double log_u_series_ = 0;        // log u(r_series)
  double fin_part_ = 0;            // u(r_series) - leading power part
  double u_zone_ = 0;              // u(0.9 r_max)
};

}  // namespace curvmass
