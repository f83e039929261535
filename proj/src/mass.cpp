#include "curvmass/mass.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "curvmass/numerics.hpp"
#include "curvmass/specfun.hpp"

namespace curvmass {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double k4Pi = 4.0 * kPi;
}  // namespace

double hawking_mass(double area, double willmore, double lambda) {
  if (!(area > 0)) throw std::domain_error("hawking_mass: area must be positive");
  if (willmore < 0) throw std::domain_error("hawking_mass: willmore must be >= 0");
  return std::sqrt(area / (16.0 * kPi)) *
         (1.0 - lambda * area / (12.0 * kPi) - willmore / (16.0 * kPi));
}

double hawking_mass_sphere(const RadialProfile& profile, double r, double lambda) {
  const double area = k4Pi * r * r;
  const double willmore = 16.0 * kPi * std::max(profile.phi_stable(r), 0.0);
  return hawking_mass(area, willmore, lambda);
}

double hawking_geroch_rhs(const RadialProfile& profile, double r, double lambda) {
  return r * r * r * (scalar_curvature(profile, r) - 2.0 * lambda) / 8.0;
}

MassEvaluator::MassEvaluator(RadialProfile profile, StructuralCoefficients coeffs)
    : profile_(std::move(profile)),
      coeffs_(std::move(coeffs)),
      green_(profile_, coeffs_.params().p) {
  const auto t0 = profile_.taylor0();  // also rejects capped profiles
  if (!(t0[0] == 1.0))
    throw std::domain_error("MassEvaluator: profile must have phi(0) = 1 (pole at center)");
}

double MassEvaluator::bulk_integrand(double tau) const {
  const double lambda = params().lambda;
  const auto lv = green_.level_at(tau);
  const double r2 = std::exp(2.0 * lv.log_r);
  return std::exp(coeffs_.lambda(tau)) * k4Pi * (1.0 - lambda * r2);
}

double MassEvaluator::lower_tail(double t_min) const {
  const double p = params().p;
  const double lambda = params().lambda;
  const double el = std::exp(coeffs_.lambda(t_min));
  const double r2 = std::exp(2.0 * green_.level_at(t_min).log_r);
  // e^lambda ~ e^{t/(3-p)} and e^lambda r^2 ~ e^{3t/(3-p)} this deep, so the
  // two contributions integrate to (3-p) and (3-p)/3 times their endpoint values
  return k4Pi * (3.0 - p) * el * (1.0 - lambda * r2 / 3.0);
}

double MassEvaluator::boundary_term(const RadialGreen::Level& lv) const {
  const double p = params().p;
  const double q = 1.0 / (p - 1.0);
  const double t = lv.t;
  const double lam = coeffs_.lambda(t);
  const double mu = coeffs_.mu(t);
  const double h_mean = green_.mean_curvature_at(lv);
  // e^lambda |grad w| 4 pi r^2 = 4 pi (p-1) exp(lambda + t/(p-1) + (2 - 2/(p-1)) log r)
  const double base =
      k4Pi * (p - 1.0) * std::exp(lam + q * t + (2.0 - 2.0 * q) * lv.log_r);
  const double grad_w = green_.grad_w_at(lv);
  return base * (h_mean - mu * grad_w);
}

double MassEvaluator::mass_at(double t) const {
  const double t_min = std::min(t, 0.0) - 10.0;
  double m = lower_tail(t_min);
  m += integrate_adaptive([this](double tau) { return bulk_integrand(tau); },
                          t_min, t, 1e-11, SingularEnd::none, 1e-300)
           .value;
  return m - boundary_term(green_.level_at(t));
}

double MassEvaluator::derivative_rhs(double t) const {
  const double p = params().p;
  const double lambda = params().lambda;
  const auto lv = green_.level_at(t);
  const double r = lv.r;
  const double area = k4Pi * std::exp(2.0 * lv.log_r);
  const double curv_term =
      (scalar_curvature(profile_, r) - 2.0 * lambda) / 2.0;
  const double alpha = coeffs_.alpha(t);
  const double grad_w = green_.grad_w_at(lv);
  const double sq = green_.mean_curvature_at(lv) / 2.0 - alpha * grad_w;
  return std::exp(coeffs_.lambda(t)) * area *
         (curv_term + (5.0 - p) / (p - 1.0) * sq * sq);
}

MassProfileResult MassEvaluator::profile_rows(std::span<const double> t_grid) const {
  if (t_grid.size() < 2)
    throw std::invalid_argument("profile_rows: need at least two grid points");
  for (std::size_t i = 0; i + 1 < t_grid.size(); ++i)
    if (!(t_grid[i] < t_grid[i + 1]))
      throw std::invalid_argument("profile_rows: t grid must be increasing");

  MassProfileResult out;
  out.params = params();
  out.profile_desc = profile_.describe();
  out.rows.resize(t_grid.size());

  auto bulk_f = [this](double tau) { return bulk_integrand(tau); };
  const double t_min = std::min(t_grid.front(), 0.0) - 10.0;
  double running = lower_tail(t_min);
  running += integrate_adaptive(bulk_f, t_min, t_grid.front(), 1e-11,
                                SingularEnd::none, 1e-300)
                 .value;

  const double spacing = t_grid[1] - t_grid[0];
  const double h = 1e-4 * std::max(1.0, spacing / 0.25);

  RadialGreen::Level hint;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const double t = t_grid[i];
    if (i > 0)
      running += integrate_adaptive(bulk_f, t_grid[i - 1], t, 1e-11,
                                    SingularEnd::none, 1e-300)
                     .value;
    const auto lv = green_.level_at(t, hint);
    hint = lv;
    MassRow& row = out.rows[i];
    row.t = t;
    row.r = lv.r;
    row.area = k4Pi * lv.r * lv.r;
    row.H = green_.mean_curvature_at(lv);
    row.grad_w = green_.grad_w_at(lv);
    row.mass = running - boundary_term(lv);
    // central difference of the mass itself
    const double bulk_fwd =
        integrate_adaptive(bulk_f, t, t + h, 1e-11, SingularEnd::none, 1e-300).value;
    const double bulk_bwd =
        integrate_adaptive(bulk_f, t - h, t, 1e-11, SingularEnd::none, 1e-300).value;
    const double m_fwd = running + bulk_fwd - boundary_term(green_.level_at(t + h, lv));
    const double m_bwd = running - bulk_bwd - boundary_term(green_.level_at(t - h, lv));
    row.dmdt_num = (m_fwd - m_bwd) / (2.0 * h);
    row.dmdt_formula = derivative_rhs(t);
  }
  return out;
}

PolarizedMassBreakdown MassEvaluator::polarized() const {
  const double lambda = params().lambda;
  const double p = params().p;
  if (!(lambda > 0.0))
    throw std::domain_error("polarized_mass: requires lambda > 0");
  const double r_lambda = params().r_lambda;
  const double r_bdry = profile_.r_max();
  const double q = 1.0 / (p - 1.0);

  PolarizedMassBreakdown b;
  b.k_p = specfun::k_p(p);

  // upper truncation: the integrand decays like e^{-t/(p-1)} once the levels
  // hug the boundary
  const double bdry_factor = k4Pi * std::abs(1.0 - lambda * r_bdry * r_bdry);
  double t_max = 5.0;
  while (t_max < 400.0 &&
         (p - 1.0) * std::exp(coeffs_.lambda(t_max)) * std::max(bdry_factor, 1e-2) >=
             1e-9)
    t_max += 5.0;
  const double t_min = -30.0;

  b.t_min = t_min;
  b.t_max = t_max;
  b.lower_tail = lower_tail(t_min);
  b.upper_tail = (p - 1.0) * std::exp(coeffs_.lambda(t_max)) * k4Pi *
                 (1.0 - lambda * r_bdry * r_bdry);
  b.bulk = b.lower_tail + b.upper_tail +
           integrate_adaptive([this](double tau) { return bulk_integrand(tau); },
                              t_min, t_max, 1e-11, SingularEnd::none, 1e-300)
               .value;

  const double grad_u_bdry = std::pow(r_bdry, -2.0 * q);
  const double area_bdry = k4Pi * r_bdry * r_bdry;
  const double h_bdry = mean_curvature(profile_, r_bdry);
  b.boundary_h_term = std::pow(r_lambda, 2.0 * q) / (8.0 * kPi) *
                      specfun::gamma_ratio_lambda(p) * grad_u_bdry * h_bdry *
                      area_bdry;
  b.boundary_grad_term = std::pow(r_lambda, (5.0 - p) * q) / (16.0 * kPi) *
                         b.k_p * grad_u_bdry * grad_u_bdry * area_bdry;
  b.total = b.bulk - b.boundary_h_term + b.boundary_grad_term;

  // finiteness: Lambda int e^lambda Per(Omega_tau) d tau against the Hoelder
  // bound Lambda [4 pi (p-1)^{p-1} int e^{p lambda + tau} d tau]^{1/p} |M|^{(p-1)/p}
  auto perim_f = [this, lambda](double tau) {
    const auto lv = green_.level_at(tau);
    return std::exp(coeffs_.lambda(tau)) * k4Pi * std::exp(2.0 * lv.log_r);
  };
  const double low_perim = lambda * (3.0 - p) / 3.0 * perim_f(t_min);
  const double up_perim = lambda * (p - 1.0) * perim_f(t_max);
  b.second_summand =
      low_perim + up_perim +
      lambda * integrate_adaptive(perim_f, t_min, t_max, 1e-11,
                                  SingularEnd::none, 1e-300)
                    .value;

  auto decay_f = [this, p](double tau) {
    return std::exp(p * coeffs_.lambda(tau) + tau);
  };
  const double low_decay = (3.0 - p) / 3.0 * decay_f(t_min);
  const double up_decay = (p - 1.0) * decay_f(t_max);
  const double decay_int =
      low_decay + up_decay +
      integrate_adaptive(decay_f, t_min, t_max, 1e-11, SingularEnd::none, 1e-300)
          .value;
  auto vol_f = [this](double r) {
    return k4Pi * r * r / std::sqrt(profile_.phi_stable(r));
  };
  b.volume = integrate_adaptive(vol_f, 0.0, r_bdry, 1e-11,
                                profile_.boundary_kind() == BoundaryKind::equator
                                    ? SingularEnd::right_sqrt
                                    : SingularEnd::none,
                                1e-300)
                 .value;
  b.second_summand_bound =
      lambda *
      std::pow(k4Pi * std::pow(p - 1.0, p - 1.0) * decay_int, 1.0 / p) *
      std::pow(b.volume, (p - 1.0) / p);
  return b;
}

MassProfileResult mass_profile(const RadialProfile& profile,
                               const StructuralCoefficients& coeffs,
                               const ModelParams& params,
                               std::span<const double> t_grid) {
  if (coeffs.params().lambda != params.lambda || coeffs.params().p != params.p)
    throw std::invalid_argument(
        "mass_profile: structural coefficients were built for different "
        "(lambda, p) than requested");
  return MassEvaluator(profile, coeffs).profile_rows(t_grid);
}

PolarizedMassBreakdown polarized_mass(const RadialProfile& profile,
                                      const StructuralCoefficients& coeffs) {
  return MassEvaluator(profile, coeffs).polarized();
}

double one_harmonic_mass(double lambda, double t_star) {
  if (!(lambda > 0.0))
    throw std::domain_error("one_harmonic_mass: lambda must be positive");
  const double t_lambda = std::log(3.0 / lambda);
  const double t_top = std::min(t_lambda, t_star);
  const double closed = std::exp(t_top / 2.0) / 2.0 *
                        (1.0 - std::exp(t_top - t_lambda));
  // quadrature of the defining integral with the area law 4 pi e^tau
  const double a = t_top - 60.0;
  const double tail = std::exp(a / 2.0) / 2.0 - lambda / 6.0 * std::exp(1.5 * a);
  // the integral vanishes identically at t_star = T_Lambda, so convergence
  // needs an absolute floor at the scale of the positive part
  const double floor_abs = 1e-14 * std::max(1.0, std::exp(t_top / 2.0));
  const double quad =
      tail + integrate_adaptive(
                 [lambda](double tau) {
                   return std::exp(tau / 2.0) / (16.0 * kPi) * k4Pi *
                          (1.0 - lambda * std::exp(tau));
                 },
                 a, t_top, 1e-12, SingularEnd::none, floor_abs)
                 .value;
  if (std::abs(closed - quad) > 1e-10 * std::max(1.0, std::abs(closed)))
    throw std::logic_error("one_harmonic_mass: closed form and quadrature disagree");
  return closed;
}

double sds_t_star(double lambda, double m) {
  return 2.0 * std::log(sds_horizon_radii(lambda, m).second);
}

FormalLimitTable formal_limit_experiment(const RadialProfile& profile,
                                         double lambda, double t,
                                         const std::vector<double>& p_list) {
  if (!(lambda > 0.0))
    throw std::domain_error("formal_limit_experiment: lambda must be positive");
  const double t_lambda = std::log(3.0 / lambda);
  if (!(t < t_lambda))
    throw std::domain_error("formal_limit_experiment: t must lie below T_Lambda");
  const double r_sphere = std::exp(t / 2.0);
  if (!(r_sphere < profile.r_max()))
    throw std::domain_error(
        "formal_limit_experiment: e^{t/2} exceeds the profile radius");
  FormalLimitTable table;
  table.lambda = lambda;
  table.t = t;
  table.experimental = true;
  table.caveat =
      "trend diagnostic only: the two columns label surfaces differently "
      "(level value t vs area radius e^{t/2}), so their gap mixes mass and "
      "relabeling effects";
  const double m_haw = hawking_mass_sphere(profile, r_sphere, lambda);
  for (double p : p_list) {
    const ModelParams mp = make_model_params(lambda, p);
    MassEvaluator ev(profile, coefficients_closed_form(mp));
    FormalLimitRow row;
    row.p = p;
    row.m_p = ev.mass_at(t);
    row.m_hawking = m_haw;
    row.gap = std::abs(row.m_p - row.m_hawking);
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace curvmass
