#include "curvmass/pgreen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "curvmass/numerics.hpp"

namespace curvmass {

namespace {
constexpr double kPanelRelTol = 1e-13;
constexpr std::size_t kPanelCount = 240;
}  // namespace

RadialGreen::RadialGreen(RadialProfile profile, double p)
    : profile_(std::move(profile)), p_(p) {
  if (!(p > 1.0 && p < 3.0))
    throw std::domain_error("RadialGreen: p must lie in (1, 3)");
  if (profile_.kind() == ProfileKind::schwarzschild_de_sitter_capped)
    throw std::domain_error(
        "RadialGreen: the capped Schwarzschild-de Sitter profile is only "
        "Lipschitz at the gluing sphere; it is not served by the p-Green path");
  q_ = 1.0 / (p_ - 1.0);
  e0_ = 1.0 - 2.0 * q_;
  const double R = profile_.r_max();
  r_series_ = 1e-3 * R;
  boundary_zone_r_ = 0.9 * R;

  const auto c = profile_.taylor0();
  g_[0] = 1.0;
  g_[1] = 0.0;
  g_[2] = -0.5 * c[2];
  g_[3] = -0.5 * c[3];
  g_[4] = 0.375 * c[2] * c[2] - 0.5 * c[4];

  u_zone_ = u_from_gap(R - boundary_zone_r_);

  node_r_.resize(kPanelCount + 1);
  node_u_.resize(kPanelCount + 1);
  const double l0 = std::log(r_series_), l1 = std::log(boundary_zone_r_);
  for (std::size_t i = 0; i <= kPanelCount; ++i)
    node_r_[i] = std::exp(l0 + (l1 - l0) * static_cast<double>(i) /
                                   static_cast<double>(kPanelCount));
  node_r_.front() = r_series_;
  node_r_.back() = boundary_zone_r_;
  node_u_.back() = u_zone_;
  auto f = [this](double rho) {
    return std::pow(rho, -2.0 * q_) / std::sqrt(profile_.phi(rho));
  };
  for (std::size_t i = kPanelCount; i-- > 0;) {
    node_u_[i] = node_u_[i + 1] +
                 integrate_adaptive(f, node_r_[i], node_r_[i + 1], kPanelRelTol,
                                    SingularEnd::none, 1e-300)
                     .value;
  }
  log_u_series_ = std::log(node_u_.front());
  fin_part_ = node_u_.front() -
              std::exp(e0_ * std::log(r_series_)) / (-e0_);
}

double RadialGreen::u_from_gap(double gap) const {
  if (gap <= 0.0) return 0.0;
  const double R = profile_.r_max();
  if (profile_.boundary_kind() == BoundaryKind::equator) {
    auto f = [this, R](double s) {
      const double g = s * s;
      return 2.0 * s * std::pow(R - g, -2.0 * q_) /
             std::sqrt(profile_.phi_gap(g));
    };
    return integrate_adaptive(f, 0.0, std::sqrt(gap), kPanelRelTol,
                              SingularEnd::none, 1e-300)
        .value;
  }
  auto f = [this, R](double g) {
    return std::pow(R - g, -2.0 * q_) / std::sqrt(profile_.phi_gap(g));
  };
  return integrate_adaptive(f, 0.0, gap, kPanelRelTol, SingularEnd::none,
                            1e-300)
      .value;
}

double RadialGreen::u_panels(double r) const {
  const auto it = std::upper_bound(node_r_.begin(), node_r_.end(), r);
  std::size_t j = static_cast<std::size_t>(it - node_r_.begin());
  if (j == 0) j = 1;
  if (j > kPanelCount) j = kPanelCount;
  auto f = [this](double rho) {
    return std::pow(rho, -2.0 * q_) / std::sqrt(profile_.phi(rho));
  };
  double part = 0.0;
  if (r < node_r_[j])
    part = integrate_adaptive(f, r, node_r_[j], kPanelRelTol,
                              SingularEnd::none, 1e-300)
               .value;
  return node_u_[j] + part;
}

double RadialGreen::u(double r) const {
  const double R = profile_.r_max();
  if (!(r > 0.0)) throw std::domain_error("RadialGreen::u: need r > 0");
  if (r >= R) return 0.0;
  if (r >= boundary_zone_r_) return u_from_gap(R - r);
  if (r >= r_series_) return u_panels(r);
  return std::exp(series_log_u(std::log(r)));
}

// Below the series threshold,
//   u(r) = T(r) (1 + delta),  T(r) = r^{e0} / (-e0),
// where delta collects the finite part of u at r_series and the termwise
// integrals of the Taylor corrections of 1/sqrt(phi).  Every piece is a
// ratio against T, so nothing overflows and nothing cancels.
double RadialGreen::series_log_u(double log_r) const {
  const double ls = std::log(r_series_);
  double delta = fin_part_ * (-e0_) * std::exp(-e0_ * log_r);
  for (int k = 2; k <= 4; ++k) {
    if (g_[k] == 0.0) continue;
    const double ek = static_cast<double>(k) + e0_;
    const double dl = ls - log_r;  // >= 0
    double ratio;  // I_k(r, r_series) / T(r)
    if (std::abs(ek * dl) < 0.5) {
      // stable through ek -> 0 (where the term degenerates to a logarithm)
      ratio = (-e0_) * std::exp(k * log_r) *
              (ek == 0.0 ? dl : std::expm1(ek * dl) / ek);
    } else {
      ratio = (-e0_ / ek) *
              (std::exp(ek * ls - e0_ * log_r) - std::exp(k * log_r));
    }
    delta += g_[k] * ratio;
  }
  return e0_ * log_r - std::log(-e0_) + std::log1p(delta);
}

double RadialGreen::log_u(double r) const {
  if (!(r > 0.0)) throw std::domain_error("RadialGreen::log_u: need r > 0");
  if (r < r_series_) return series_log_u(std::log(r));
  const double val = u(r);
  if (val <= 0.0)
    throw std::domain_error("RadialGreen::log_u: u vanishes at the boundary");
  return std::log(val);
}

double RadialGreen::w(double r) const { return -(p_ - 1.0) * log_u(r); }

std::pair<double, double> RadialGreen::w_and_grad(double r) const {
  const double lu = log_u(r);
  const double grad = (p_ - 1.0) * std::exp(-2.0 * q_ * std::log(r) - lu);
  return {-(p_ - 1.0) * lu, grad};
}

double RadialGreen::dlogu_dlogr(double log_r, double log_u_val) const {
  const double r = std::exp(log_r);
  const double ph = r < r_series_ ? 1.0 / profile_.phi(r) : 1.0 / profile_.phi_stable(r);
  return -std::exp(e0_ * log_r - log_u_val) * std::sqrt(ph);
}

RadialGreen::Level RadialGreen::level_at(double t) const {
  Level none;
  return level_at(t, none);
}

RadialGreen::Level RadialGreen::level_at(double t, const Level& hint) const {
  const double target_lu = -t / (p_ - 1.0);
  const double R = profile_.r_max();
  Level lv;
  lv.t = t;

  if (target_lu >= log_u_series_) {
    // pole zone: Newton in log r on the series form
    double lr = (target_lu + std::log(-e0_)) / e0_;
    if (hint.r > 0 && !hint.in_boundary_zone() && hint.r < r_series_)
      lr = hint.log_r;
    const double ls = std::log(r_series_);
    for (int it = 0; it < 80; ++it) {
      const double lu = series_log_u(lr);
      const double fval = lu - target_lu;
      if (std::abs(fval) < 1e-13) break;
      double step = -fval / dlogu_dlogr(lr, lu);
      if (!std::isfinite(step)) step = fval > 0 ? 0.1 : -0.1;
      lr = std::min(lr + step, ls);
    }
    lv.log_r = lr;
    lv.r = std::exp(lr);
    return lv;
  }

  const double u_star = std::exp(target_lu);
  if (u_star <= u_zone_) {
    // boundary zone: solve in the gap variable
    const bool equator = profile_.boundary_kind() == BoundaryKind::equator;
    if (equator) {
      const double dphi_b = -profile_.dphi(R);  // > 0, simple zero of phi
      // leading inversion of u = 2 R^{-2q} sqrt(gap/|phi'|) (1 + O(gap));
      // below the deep threshold the correction is smaller than rounding and
      // the quadrature's gap variable would underflow, so the leading form
      // is the answer
      const double log_gap0 = 2.0 * (target_lu + 2.0 * q_ * std::log(R) +
                                     0.5 * std::log(dphi_b) - std::log(2.0));
      if (log_gap0 < -69.0) {  // gap < 1e-30
        lv.log_gap = log_gap0;
        lv.gap = std::exp(log_gap0);
        lv.r = R - lv.gap;
        lv.log_r = std::log(R) + std::log1p(-lv.gap / R);
        return lv;
      }
      double s = std::exp(0.5 * log_gap0);
      if (hint.in_boundary_zone() && hint.gap > 0) s = std::sqrt(hint.gap);
      const double s_hi = std::sqrt(R - boundary_zone_r_);
      s = std::clamp(s, 1e-140, s_hi);
      for (int it = 0; it < 80; ++it) {
        const double fval = u_from_gap(s * s) - u_star;
        if (std::abs(fval) < 1e-14 * u_star) break;
        const double df = 2.0 * s * std::pow(R - s * s, -2.0 * q_) /
                          std::sqrt(profile_.phi_gap(s * s));
        double snew = s - fval / df;
        if (!(snew > 0) || snew > s_hi) snew = fval > 0 ? 0.5 * s : 0.5 * (s + s_hi);
        s = snew;
      }
      lv.gap = s * s;
    } else {
      // wall: u = sqrt(phi(R))^{-1} ... leading u = gap R^{-2q}/sqrt(phi(R))
      const double log_gap0 = target_lu + 2.0 * q_ * std::log(R) +
                              0.5 * std::log(profile_.phi(R));
      if (log_gap0 < -69.0) {
        lv.log_gap = log_gap0;
        lv.gap = std::exp(log_gap0);
        lv.r = R - lv.gap;
        lv.log_r = std::log(R) + std::log1p(-lv.gap / R);
        return lv;
      }
      double gap = std::exp(log_gap0);
      if (hint.in_boundary_zone() && hint.gap > 0) gap = hint.gap;
      const double gap_hi = R - boundary_zone_r_;
      gap = std::clamp(gap, 1e-140, gap_hi);
      for (int it = 0; it < 80; ++it) {
        const double fval = u_from_gap(gap) - u_star;
        if (std::abs(fval) < 1e-14 * u_star) break;
        const double df =
            std::pow(R - gap, -2.0 * q_) / std::sqrt(profile_.phi_gap(gap));
        double gnew = gap - fval / df;
        if (!(gnew > 0) || gnew > gap_hi)
          gnew = fval > 0 ? 0.5 * gap : 0.5 * (gap + gap_hi);
        gap = gnew;
      }
      lv.gap = gap;
    }
    lv.log_gap = std::log(lv.gap);
    lv.r = R - lv.gap;
    lv.log_r = std::log(R) + std::log1p(-lv.gap / R);
    return lv;
  }

  // middle zone
  auto fn = [this, target_lu](double r) { return std::log(u_panels(r)) - target_lu; };
  double lo = r_series_, hi = boundary_zone_r_;
  if (hint.r > 0 && !hint.in_boundary_zone() && hint.r > r_series_ &&
      hint.r < boundary_zone_r_) {
    // grow a bracket geometrically around the previous level
    double w_lo = hint.r, w_hi = hint.r, span = 0.05 * hint.r;
    for (int k = 0; k < 8; ++k) {
      w_lo = std::max(r_series_, hint.r - span);
      w_hi = std::min(boundary_zone_r_, hint.r + span);
      if (fn(w_lo) >= 0.0 && fn(w_hi) <= 0.0) {
        lo = w_lo;
        hi = w_hi;
        break;
      }
      span *= 4.0;
    }
  }
  lv.r = find_root_bracketed(fn, lo, hi, 1e-14 * R);
  lv.log_r = std::log(lv.r);
  return lv;
}

double RadialGreen::grad_w_at(const Level& lv) const {
  return std::exp(log_grad_w_at(lv));
}

double RadialGreen::log_grad_w_at(const Level& lv) const {
  return std::log(p_ - 1.0) + q_ * lv.t - 2.0 * q_ * lv.log_r;
}

double RadialGreen::phi_at(const Level& lv) const {
  if (lv.in_boundary_zone()) return profile_.phi_gap(lv.gap);
  return profile_.phi(lv.r);
}

double RadialGreen::mean_curvature_at(const Level& lv) const {
  if (lv.in_boundary_zone() && lv.log_gap < -69.0) {
    // phi itself may underflow here; its simple zero gives
    // phi = |phi'(r_max)| gap (1 + O(gap)) in log form
    if (profile_.boundary_kind() == BoundaryKind::wall)
      return 2.0 * std::exp(0.5 * std::log(profile_.phi(profile_.r_max())) -
                            lv.log_r);
    const double dphi_b = -profile_.dphi(profile_.r_max());
    return 2.0 * std::exp(0.5 * (std::log(dphi_b) + lv.log_gap) - lv.log_r);
  }
  const double ph = phi_at(lv);
  if (ph <= 0.0) return 0.0;
  return 2.0 * std::exp(0.5 * std::log(ph) - lv.log_r);
}

double RadialGreen::log_u_recomputed_at(const Level& lv) const {
  if (lv.in_boundary_zone()) {
    if (lv.log_gap < -69.0) {
      // below the quadrature's reach; the leading form of the tail integral
      // near the simple zero (or wall) of phi is exact to rounding here,
      // which makes this branch the inverse of the deep-level solve rather
      // than an independent recomputation
      const double R = profile_.r_max();
      if (profile_.boundary_kind() == BoundaryKind::equator) {
        const double dphi_b = -profile_.dphi(R);
        return std::log(2.0) - 2.0 * q_ * std::log(R) +
               0.5 * (lv.log_gap - std::log(dphi_b));
      }
      return lv.log_gap - 2.0 * q_ * std::log(R) -
             0.5 * std::log(profile_.phi(R));
    }
    return std::log(u_from_gap(lv.gap));
  }
  if (lv.r < r_series_) return series_log_u(lv.log_r);
  return std::log(u_panels(lv.r));
}

}  // namespace curvmass
