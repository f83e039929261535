#include "curvmass/structural.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "curvmass/numerics.hpp"
#include "curvmass/specfun.hpp"

namespace curvmass {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Model p-Green data for Lambda < 0: phi = 1 + r^2/L^2 on [0, infinity),
// u(r) = int_r^inf rho^{-2/(p-1)} (1 + rho^2/L^2)^{-1/2} d rho.  Only alpha(t)
// is needed from this object.  Panels cover [1e-3 L, 30 L]; beyond 30 L the
// integrand's 1/rho expansion is integrated termwise, below 1e-3 L the same
// series-against-leading-power representation as the compact case is used.
class HyperbolicAlpha {
 public:
  HyperbolicAlpha(double lambda, double p)
      : p_(p),
        q_(1.0 / (p - 1.0)),
        e0_(1.0 - 2.0 / (p - 1.0)),
        L_(std::sqrt(-3.0 / lambda)) {
    r_series_ = 1e-3 * L_;
    r_far_ = 30.0 * L_;
    const std::size_t n = 200;
    node_r_.resize(n + 1);
    node_u_.resize(n + 1);
    const double l0 = std::log(r_series_), l1 = std::log(r_far_);
    for (std::size_t i = 0; i <= n; ++i)
      node_r_[i] =
          std::exp(l0 + (l1 - l0) * static_cast<double>(i) / static_cast<double>(n));
    node_u_.back() = u_far(r_far_);
    auto f = [this](double rho) {
      return std::pow(rho, -2.0 * q_) / std::sqrt(1.0 + rho * rho / (L_ * L_));
    };
    for (std::size_t i = n; i-- > 0;)
      node_u_[i] = node_u_[i + 1] + integrate_adaptive(f, node_r_[i], node_r_[i + 1],
                                                       1e-13, SingularEnd::none, 1e-300)
                                        .value;
    log_u_series_ = std::log(node_u_.front());
    fin_part_ = node_u_.front() - std::exp(e0_ * std::log(r_series_)) / (-e0_);
    log_u_far_ = std::log(node_u_.back());
  }

  double alpha(double t) const {
    const double target_lu = -t / (p_ - 1.0);
    const double lr = level_log_r(target_lu);
    const double r = std::exp(lr);
    const double phi = 1.0 + r * r / (L_ * L_);
    return std::exp(target_lu + (2.0 * q_ - 1.0) * lr) * std::sqrt(phi) / (p_ - 1.0);
  }

 private:
  double u_far(double r) const {
    const double L2 = L_ * L_;
    double s = 0.0, c = 1.0;
    static constexpr double num[4] = {1.0, -0.5, 0.375, -0.3125};
    for (int j = 0; j < 4; ++j) {
      s += num[j] * c * std::pow(r, -2.0 * q_ - 2.0 * j) / (2.0 * q_ + 2.0 * j);
      c *= L2;
    }
    return L_ * s;
  }

  double series_log_u(double lr) const {
    const double ls = std::log(r_series_);
    double delta = fin_part_ * (-e0_) * std::exp(-e0_ * lr);
    const double g[5] = {1.0, 0.0, -0.5 / (L_ * L_), 0.0,
                         0.375 / (L_ * L_ * L_ * L_)};
    for (int k = 2; k <= 4; ++k) {
      if (g[k] == 0.0) continue;
      const double ek = k + e0_;
      const double dl = ls - lr;
      double ratio;
      if (std::abs(ek * dl) < 0.5) {
        ratio = (-e0_) * std::exp(k * lr) *
                (ek == 0.0 ? dl : std::expm1(ek * dl) / ek);
      } else {
        ratio = (-e0_ / ek) * (std::exp(ek * ls - e0_ * lr) - std::exp(k * lr));
      }
      delta += g[k] * ratio;
    }
    return e0_ * lr - std::log(-e0_) + std::log1p(delta);
  }

  double u_panels(double r) const {
    const auto it = std::upper_bound(node_r_.begin(), node_r_.end(), r);
    std::size_t j = static_cast<std::size_t>(it - node_r_.begin());
    j = std::clamp<std::size_t>(j, 1, node_r_.size() - 1);
    auto f = [this](double rho) {
      return std::pow(rho, -2.0 * q_) / std::sqrt(1.0 + rho * rho / (L_ * L_));
    };
    double part = 0.0;
    if (r < node_r_[j])
      part = integrate_adaptive(f, r, node_r_[j], 1e-13, SingularEnd::none, 1e-300)
                 .value;
    return node_u_[j] + part;
  }

  double level_log_r(double target_lu) const {
    if (target_lu >= log_u_series_) {
      double lr = (target_lu + std::log(-e0_)) / e0_;
      for (int it = 0; it < 80; ++it) {
        const double lu = series_log_u(lr);
        const double fval = lu - target_lu;
        if (std::abs(fval) < 1e-13) break;
        const double r = std::exp(lr);
        const double dl = -std::exp(e0_ * lr - lu) /
                          std::sqrt(1.0 + r * r / (L_ * L_));
        lr = std::min(lr - fval / dl, std::log(r_series_));
      }
      return lr;
    }
    if (target_lu <= log_u_far_) {
      double lr = -(target_lu + std::log(2.0 * q_ / L_)) / (2.0 * q_);
      for (int it = 0; it < 80; ++it) {
        const double r = std::exp(lr);
        const double lu = std::log(u_far(r));
        const double fval = lu - target_lu;
        if (std::abs(fval) < 1e-13) break;
        const double dl = -std::exp(e0_ * lr - lu) /
                          std::sqrt(1.0 + r * r / (L_ * L_));
        lr = std::max(lr - fval / dl, std::log(r_far_));
      }
      return lr;
    }
    auto fn = [this, target_lu](double r) {
      return std::log(u_panels(r)) - target_lu;
    };
    return std::log(find_root_bracketed(fn, r_series_, r_far_, 1e-14 * L_));
  }

  double p_, q_, e0_, L_;
  double r_series_ = 0, r_far_ = 0;
  std::vector<double> node_r_, node_u_;
  double fin_part_ = 0, log_u_series_ = 0, log_u_far_ = 0;
};

struct ClosedFormData {
  double log_r;
  double x;  // Lambda r^2 / 3
  double y;  // 1 - x, exact near the equator (= phi of the model)
};

}  // namespace

struct StructuralCoefficients::Impl {
  ModelParams params;
  CoeffRoute route = CoeffRoute::closed_form;
  std::shared_ptr<const RadialGreen> green;  // lambda > 0
  std::shared_ptr<const HyperbolicAlpha> hyp;  // lambda < 0
  OdePath path;  // ode route: components (mu, lambda)
  double t_start = 0;

  double q() const { return 1.0 / (params.p - 1.0); }

  ClosedFormData model_level(double t) const {
    const auto lv = green->level_at(t);
    ClosedFormData d;
    d.log_r = lv.log_r;
    d.y = green->phi_at(lv);
    d.x = std::exp(2.0 * (lv.log_r - std::log(params.r_lambda)));
    return d;
  }

  double alpha(double t) const {
    const double p = params.p;
    if (params.lambda == 0.0) return 1.0 / (3.0 - p);
    if (params.lambda < 0.0) return hyp->alpha(t);
    const ClosedFormData d = model_level(t);
    return std::exp(-t / (p - 1.0) + (2.0 * q() - 1.0) * d.log_r) *
           std::sqrt(d.y) / (p - 1.0);
  }

  double mu_closed(double t) const {
    const double p = params.p;
    if (params.lambda == 0.0) return 1.0 / (3.0 - p);
    const ClosedFormData d = model_level(t);
    const double ups = specfun::upsilon_value_xy(p, d.x, d.y);
    const double combo = specfun::upsilon_boundary_combo_xy(p, d.x, d.y);
    return std::exp(-t / (p - 1.0) + (2.0 * q() - 1.0) * d.log_r) * ups /
           ((p - 1.0) * combo);
  }

  double lambda_closed(double t) const {
    const double p = params.p;
    if (params.lambda == 0.0) return t / (3.0 - p) + lambda_kappa(p);
    const ClosedFormData d = model_level(t);
    const double combo = specfun::upsilon_boundary_combo_xy(p, d.x, d.y);
    return -t / (p - 1.0) + 2.0 * q() * d.log_r + std::log(combo) -
           std::log(8.0 * kPi * (p - 1.0));
  }

  double mu(double t) const {
    if (route != CoeffRoute::ode) return mu_closed(t);
    if (t <= t_start) return 1.0 / (3.0 - params.p);
    if (t > path.t_back())
      throw std::domain_error("structural coefficients: t beyond integrated range");
    return path.eval_component(t, 0);
  }

  double lambda(double t) const {
    if (route != CoeffRoute::ode) return lambda_closed(t);
    if (t <= t_start)
      return t / (3.0 - params.p) + lambda_kappa(params.p);
    if (t > path.t_back())
      throw std::domain_error("structural coefficients: t beyond integrated range");
    return path.eval_component(t, 1);
  }
};

StructuralCoefficients::StructuralCoefficients(std::shared_ptr<const Impl> impl)
    : impl_(std::move(impl)) {}

const ModelParams& StructuralCoefficients::params() const { return impl_->params; }
CoeffRoute StructuralCoefficients::route() const { return impl_->route; }
double StructuralCoefficients::alpha(double t) const { return impl_->alpha(t); }
double StructuralCoefficients::mu(double t) const { return impl_->mu(t); }
double StructuralCoefficients::lambda(double t) const { return impl_->lambda(t); }
double StructuralCoefficients::exp_lambda(double t) const {
  return std::exp(impl_->lambda(t));
}
double StructuralCoefficients::phi_cap(double r) const {
  return phi_psi(impl_->params, r).first;
}
double StructuralCoefficients::psi_cap(double r) const {
  return phi_psi(impl_->params, r).second;
}

double lambda_kappa(double p) {
  return (p - 1.0) / (3.0 - p) * std::log((p - 1.0) / (3.0 - p)) -
         std::log(8.0 * kPi * (3.0 - p));
}

double alpha_model(const ModelParams& params, double t) {
  const double p = params.p;
  if (params.lambda == 0.0) return 1.0 / (3.0 - p);
  if (params.lambda < 0.0) return HyperbolicAlpha(params.lambda, p).alpha(t);
  RadialGreen green(RadialProfile::de_sitter(params.lambda), p);
  const auto lv = green.level_at(t);
  const double y = green.phi_at(lv);
  return std::exp(-t / (p - 1.0) + (3.0 - p) / (p - 1.0) * lv.log_r) *
         std::sqrt(y) / (p - 1.0);
}

std::pair<double, double> phi_psi(const ModelParams& params, double r) {
  const double p = params.p;
  if (!(r > 0.0)) throw std::domain_error("phi_psi: need r > 0");
  if (params.lambda == 0.0) return {r / (8.0 * kPi), r / (8.0 * kPi)};
  if (params.lambda > 0.0) {
    if (!(r < params.r_lambda))
      throw std::domain_error("phi_psi: r must lie below sqrt(3/lambda), Phi diverges there");
    const double x = params.lambda * r * r / 3.0;
    const double y = 1.0 - x;
    const double ups = specfun::upsilon_value_xy(p, x, y);
    const double combo = specfun::upsilon_boundary_combo_xy(p, x, y);
    return {r * ups / (8.0 * kPi * y), r * combo / (8.0 * kPi * std::sqrt(y))};
  }
  // lambda < 0: series while the argument of Y stays above -0.81, then
  // continue the linear ODE system outward.
  const double L = std::sqrt(-3.0 / params.lambda);
  const double r_seed = 0.9 * L;
  const double kappa = (p - 1.0) / (5.0 - p);
  auto from_series = [&](double rr) -> std::pair<double, double> {
    const double x = params.lambda * rr * rr / 3.0;  // < 0
    const auto uv = specfun::upsilon_pair_ext(p, x);
    const double pref = rr / (8.0 * kPi * (1.0 - x));
    return {pref * uv.y, pref * (uv.y + 2.0 * kappa * x * uv.dy)};
  };
  if (r <= r_seed) return from_series(r);
  auto [phi0, psi0] = from_series(r_seed);
  OdeRhs rhs = [&params, p](double rr, std::span<const double> yv,
                            std::span<double> dy) {
    const double x = params.lambda * rr * rr / 3.0;
    const double w = x / (1.0 - x);
    dy[0] = (2.0 * (w - (3.0 - p) / (p - 1.0)) * yv[0] +
             (5.0 - p) / (p - 1.0) * yv[1]) / rr;
    dy[1] = (-(3.0 - p) / (p - 1.0) * yv[0] +
             (w + 2.0 / (p - 1.0)) * yv[1]) / rr;
  };
  const double y0[2] = {phi0, psi0};
  OdePath path = solve_ivp(rhs, r_seed, std::span<const double>(y0, 2), r, 1e-11);
  return {path.eval_component(r, 0), path.eval_component(r, 1)};
}

StructuralCoefficients coefficients_closed_form(const ModelParams& params) {
  if (params.lambda < 0.0)
    throw std::domain_error(
        "coefficients_closed_form: lambda < 0 is served by coefficients_ode");
  auto impl = std::make_shared<StructuralCoefficients::Impl>();
  impl->params = params;
  impl->route = params.lambda == 0.0 ? CoeffRoute::lambda_zero_exact
                                     : CoeffRoute::closed_form;
  if (params.lambda > 0.0)
    impl->green = std::make_shared<const RadialGreen>(
        RadialProfile::de_sitter(params.lambda), params.p);
  return StructuralCoefficients(std::move(impl));
}

StructuralCoefficients coefficients_ode(const ModelParams& params,
                                        double t_start, double t_end) {
  if (!(t_start <= -15.0))
    throw std::invalid_argument(
        "coefficients_ode: t_start must be <= -15 (deep in the mu -> 1/(3-p) regime)");
  if (!(t_end > t_start)) throw std::invalid_argument("coefficients_ode: empty range");
  const double p = params.p;
  auto impl = std::make_shared<StructuralCoefficients::Impl>();
  impl->params = params;
  impl->route = CoeffRoute::ode;
  impl->t_start = t_start;
  if (params.lambda > 0.0)
    impl->green = std::make_shared<const RadialGreen>(
        RadialProfile::de_sitter(params.lambda), params.p);
  else if (params.lambda < 0.0)
    impl->hyp = std::make_shared<const HyperbolicAlpha>(params.lambda, params.p);

  const StructuralCoefficients::Impl& im = *impl;
  OdeRhs rhs = [&im, p](double t, std::span<const double> y, std::span<double> dy) {
    const double a = im.alpha(t);
    const double mu = y[0];
    const double c53 = (5.0 - p) / (p - 1.0);
    const double c31 = (3.0 - p) / (p - 1.0);
    const double c11 = 1.0 / (p - 1.0);
    dy[0] = c53 * a * a - (c53 * a + c11) * mu + c31 * mu * mu;
    dy[1] = c53 * a - c11 - c31 * mu;
  };
  const double y0[2] = {1.0 / (3.0 - p), t_start / (3.0 - p) + lambda_kappa(p)};
  try {
    impl->path = solve_ivp(rhs, t_start, std::span<const double>(y0, 2), t_end, 1e-10);
  } catch (const ode_error& e) {
    throw std::runtime_error(
        std::string("coefficients_ode: Riccati integration failed (") + e.what() +
        "); the solution left the global corridor, try a smaller t_start");
  }
  if (params.lambda < 0.0) {
    const double hi = 1.0 / (3.0 - p) + 1e-9;
    for (const auto& node : impl->path.nodes()) {
      if (!(node.y[0] > -1e-12 && node.y[0] < hi))
        throw std::runtime_error(
            "coefficients_ode: mu left the corridor (0, 1/(3-p)) at t = " +
            std::to_string(node.t) + "; try a smaller t_start");
    }
  }
  return StructuralCoefficients(std::move(impl));
}

std::pair<double, double> riccati_equilibria(double p, double alpha) {
  const double radicand = 1.0 + 2.0 * (5.0 - p) * alpha -
                          (7.0 - 3.0 * p) * (5.0 - p) * alpha * alpha;
  if (radicand < 0.0)
    throw std::domain_error(
        "riccati_equilibria: complex equilibria (negative radicand, legitimate "
        "for large alpha)");
  const double root = std::sqrt(radicand);
  const double base = 1.0 + (5.0 - p) * alpha;
  return {(base - root) / (2.0 * (3.0 - p)), (base + root) / (2.0 * (3.0 - p))};
}

PLimitTable p_limit_profiles(double lambda, double t,
                             const std::vector<double>& p_list) {
  if (!(lambda > 0.0))
    throw std::domain_error("p_limit_profiles: lambda must be positive");
  const double t_lambda = std::log(3.0 / lambda);
  if (t == t_lambda)
    throw std::domain_error("p_limit_profiles: t must differ from T_Lambda");
  PLimitTable table;
  table.lambda = lambda;
  table.t = t;
  const double r_lambda = std::sqrt(3.0 / lambda);
  table.target_r = std::min(std::exp(t / 2.0), r_lambda);
  if (t < t_lambda) {
    table.target_exp_lambda = std::exp(t / 2.0) / (16.0 * kPi);
    table.target_mu_exp_lambda = std::exp(t / 2.0) / (32.0 * kPi);
  }
  for (double p : p_list) {
    const ModelParams mp = make_model_params(lambda, p);
    StructuralCoefficients c = coefficients_closed_form(mp);
    RadialGreen green(RadialProfile::de_sitter(lambda), p);
    PLimitRow row;
    row.p = p;
    row.r = green.level_at(t).r;
    row.exp_lambda = c.exp_lambda(t);
    row.mu_exp_lambda = c.mu(t) * row.exp_lambda;
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace curvmass
