#include "curvmass/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "curvmass/numerics.hpp"

namespace curvmass {

namespace {
constexpr double kE = 2.718281828459045235360287471352662498;

double bump(double r, double sigma) {
  const double u = r / sigma;
  return u * u * std::exp(1.0 - u * u);
}
double bump_deriv(double r, double sigma) {
  const double u = r / sigma;
  return 2.0 * u * (1.0 - u * u) * std::exp(1.0 - u * u) / sigma;
}
}  // namespace

// Clamped-left (phi'(0) = 0), natural-right cubic spline.
struct SplineData {
  std::vector<double> x, y, b, c, d;  // y + b dx + c dx^2 + d dx^3

  double eval(double r) const { return piece(r, 0); }
  double deriv(double r) const { return piece(r, 1); }

  double piece(double r, int order) const {
    std::size_t lo = 0, hi = x.size() - 1;
    if (r <= x.front()) {
      lo = 0;
    } else if (r >= x.back()) {
      lo = x.size() - 2;
    } else {
      while (hi - lo > 1) {
        std::size_t mid = (lo + hi) / 2;
        (x[mid] <= r ? lo : hi) = mid;
      }
    }
    const double t = r - x[lo];
    if (order == 0) return y[lo] + t * (b[lo] + t * (c[lo] + t * d[lo]));
    return b[lo] + t * (2 * c[lo] + t * 3 * d[lo]);
  }
};

namespace {

std::shared_ptr<const SplineData> build_spline(const std::vector<double>& x,
                                               const std::vector<double>& y) {
  const std::size_t n = x.size();
  auto s = std::make_shared<SplineData>();
  s->x = x;
  s->y = y;
  s->b.assign(n, 0);
  s->c.assign(n, 0);
  s->d.assign(n, 0);
  // Clamped at both ends: slope 0 at the pole, a one-sided three-point slope
  // estimate at the outer boundary (a natural end would force phi'' = 0
  // there and pollute the curvature of the outermost layer).
  const double h1 = x[n - 2] - x[n - 3];
  const double h2 = x[n - 1] - x[n - 2];
  const double slope_r = y[n - 3] * h2 / (h1 * (h1 + h2)) -
                         y[n - 2] * (h1 + h2) / (h1 * h2) +
                         y[n - 1] * (2.0 * h2 + h1) / (h2 * (h1 + h2));
  std::vector<double> h(n - 1), alpha(n, 0), l(n), mu(n), z(n);
  for (std::size_t i = 0; i + 1 < n; ++i) h[i] = x[i + 1] - x[i];
  alpha[0] = 3.0 * (y[1] - y[0]) / h[0];
  for (std::size_t i = 1; i + 1 < n; ++i)
    alpha[i] = 3.0 * (y[i + 1] - y[i]) / h[i] - 3.0 * (y[i] - y[i - 1]) / h[i - 1];
  alpha[n - 1] = 3.0 * slope_r - 3.0 * (y[n - 1] - y[n - 2]) / h[n - 2];
  l[0] = 2.0 * h[0];
  mu[0] = 0.5;
  z[0] = alpha[0] / l[0];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    l[i] = 2.0 * (x[i + 1] - x[i - 1]) - h[i - 1] * mu[i - 1];
    mu[i] = h[i] / l[i];
    z[i] = (alpha[i] - h[i - 1] * z[i - 1]) / l[i];
  }
  l[n - 1] = h[n - 2] * (2.0 - mu[n - 2]);
  z[n - 1] = (alpha[n - 1] - h[n - 2] * z[n - 2]) / l[n - 1];
  s->c[n - 1] = z[n - 1];
  for (std::size_t j = n - 1; j-- > 0;) {
    s->c[j] = z[j] - mu[j] * s->c[j + 1];
    s->b[j] = (y[j + 1] - y[j]) / h[j] - h[j] * (s->c[j + 1] + 2.0 * s->c[j]) / 3.0;
    s->d[j] = (s->c[j + 1] - s->c[j]) / (3.0 * h[j]);
  }
  return s;
}

}  // namespace

RadialProfile RadialProfile::de_sitter(double lambda) {
  if (!(lambda > 0)) throw std::domain_error("de_sitter: lambda must be positive");
  RadialProfile p;
  p.kind_ = ProfileKind::de_sitter;
  p.boundary_ = BoundaryKind::equator;
  p.lambda_ = lambda;
  p.r_max_ = std::sqrt(3.0 / lambda);
  return p;
}

RadialProfile RadialProfile::schwarzschild_de_sitter_capped(double lambda, double m) {
  auto [rm, rp] = sds_horizon_radii(lambda, m);
  RadialProfile p;
  p.kind_ = ProfileKind::schwarzschild_de_sitter_capped;
  p.boundary_ = BoundaryKind::equator;
  p.lambda_ = lambda;
  p.m_ = m;
  p.cap_radius_ = rm;
  p.r_max_ = rp;
  return p;
}

RadialProfile RadialProfile::constant_curvature(double a, double r_cap) {
  if (!(a > 0)) throw std::domain_error("constant_curvature: a must be positive");
  const double r_eq = 1.0 / std::sqrt(a);
  RadialProfile p;
  p.kind_ = ProfileKind::constant_curvature;
  p.a_ = a;
  if (r_cap > 0 && r_cap < r_eq) {
    p.r_max_ = r_cap;
    p.boundary_ = BoundaryKind::wall;
  } else {
    p.r_max_ = r_eq;
    p.boundary_ = BoundaryKind::equator;
  }
  return p;
}

RadialProfile RadialProfile::perturbed(double lambda, double eps, double sigma) {
  if (!(lambda > 0)) throw std::domain_error("perturbed: lambda must be positive");
  if (!(sigma > 0)) throw std::domain_error("perturbed: sigma must be positive");
  RadialProfile p;
  p.kind_ = ProfileKind::perturbed;
  p.boundary_ = BoundaryKind::equator;
  p.lambda_ = lambda;
  p.eps_ = eps;
  p.sigma_ = sigma;
  p.r_max_ = std::sqrt(3.0 / lambda);
  // phi = (1 - lambda r^2/3)(1 + eps shape) must stay positive inside
  for (int i = 1; i < 256; ++i) {
    const double r = p.r_max_ * i / 256.0;
    if (1.0 + eps * bump(r, sigma) <= 0.0)
      throw std::domain_error("perturbed: profile not positive in the interior");
  }
  return p;
}

RadialProfile RadialProfile::tabulated(std::vector<double> r, std::vector<double> phi) {
  if (r.size() != phi.size() || r.size() < 4)
    throw std::invalid_argument("tabulated: need >= 4 matching samples");
  if (!(r.front() == 0.0 && phi.front() == 1.0))
    throw std::invalid_argument("tabulated: first row must be (0, 1)");
  for (std::size_t i = 0; i + 1 < r.size(); ++i)
    if (!(r[i] < r[i + 1]))
      throw std::invalid_argument("tabulated: r must be strictly increasing");
  for (std::size_t i = 1; i + 1 < phi.size(); ++i)
    if (!(phi[i] > 0.0))
      throw std::domain_error("tabulated: phi must be positive in the interior");
  RadialProfile p;
  p.kind_ = ProfileKind::tabulated;
  p.r_max_ = r.back();
  p.boundary_ = phi.back() <= 1e-12 ? BoundaryKind::equator : BoundaryKind::wall;
  p.spline_ = build_spline(r, phi);
  return p;
}

RadialProfile RadialProfile::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open profile CSV: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty profile CSV: " + path);
  if (line.size() && line.back() == '\r') line.pop_back();
  if (line != "r,phi")
    throw std::runtime_error("profile CSV must start with header 'r,phi', got '" + line + "'");
  std::vector<double> r, phi;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string a, b;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b))
      throw std::runtime_error("bad CSV row at line " + std::to_string(lineno));
    r.push_back(std::stod(a));
    phi.push_back(std::stod(b));
  }
  return tabulated(std::move(r), std::move(phi));
}

double RadialProfile::phi(double r) const {
  switch (kind_) {
    case ProfileKind::de_sitter:
      return 1.0 - lambda_ * r * r / 3.0;
    case ProfileKind::schwarzschild_de_sitter_capped:
      return 1.0 - lambda_ * r * r / 3.0 - 2.0 * m_ / r;
    case ProfileKind::constant_curvature:
      return 1.0 - a_ * r * r;
    case ProfileKind::perturbed:
      return (1.0 - lambda_ * r * r / 3.0) * (1.0 + eps_ * bump(r, sigma_));
    case ProfileKind::tabulated:
      return spline_->eval(r);
  }
  throw std::logic_error("unreachable");
}

double RadialProfile::dphi(double r) const {
  switch (kind_) {
    case ProfileKind::de_sitter:
      return -2.0 * lambda_ * r / 3.0;
    case ProfileKind::schwarzschild_de_sitter_capped:
      return -2.0 * lambda_ * r / 3.0 + 2.0 * m_ / (r * r);
    case ProfileKind::constant_curvature:
      return -2.0 * a_ * r;
    case ProfileKind::perturbed:
      return -2.0 * lambda_ * r / 3.0 * (1.0 + eps_ * bump(r, sigma_)) +
             (1.0 - lambda_ * r * r / 3.0) * eps_ * bump_deriv(r, sigma_);
    case ProfileKind::tabulated:
      return spline_->deriv(r);
  }
  throw std::logic_error("unreachable");
}

double RadialProfile::phi_gap(double gap) const {
  const double R = r_max_;
  switch (kind_) {
    case ProfileKind::de_sitter:
      return lambda_ / 3.0 * gap * (2.0 * R - gap);
    case ProfileKind::schwarzschild_de_sitter_capped:
      // uses 1 - lambda R^2/3 = 2m/R at the outer root
      return lambda_ / 3.0 * gap * (2.0 * R - gap) -
             2.0 * m_ * gap / (R * (R - gap));
    case ProfileKind::constant_curvature:
      if (boundary_ == BoundaryKind::equator)
        return a_ * gap * (2.0 * R - gap);
      return phi(R - gap);
    case ProfileKind::perturbed:
      return lambda_ / 3.0 * gap * (2.0 * R - gap) *
             (1.0 + eps_ * bump(R - gap, sigma_));
    case ProfileKind::tabulated: {
      if (boundary_ == BoundaryKind::wall) return phi(R - gap);
      const SplineData& s = *spline_;
      const std::size_t j = s.x.size() - 2;
      const double h = s.x[j + 1] - s.x[j];
      // outside the last knot interval the plain spline evaluation has no
      // cancellation to worry about
      if (gap > h) return phi(R - gap);
      // expand the last cubic segment around r_max with phi(r_max) snapped to 0
      const double d1 = s.b[j] + h * (2 * s.c[j] + h * 3 * s.d[j]);
      const double d2 = 2 * s.c[j] + 6 * s.d[j] * h;
      const double d3 = 6 * s.d[j];
      return gap * (-d1 + gap * (d2 / 2 - gap * d3 / 6));
    }
  }
  throw std::logic_error("unreachable");
}

double RadialProfile::phi_stable(double r) const {
  if (boundary_ == BoundaryKind::equator && r > 0.9 * r_max_)
    return phi_gap(r_max_ - r);
  return phi(r);
}

std::array<double, 5> RadialProfile::taylor0() const {
  switch (kind_) {
    case ProfileKind::de_sitter:
      return {1.0, 0.0, -lambda_ / 3.0, 0.0, 0.0};
    case ProfileKind::constant_curvature:
      return {1.0, 0.0, -a_, 0.0, 0.0};
    case ProfileKind::perturbed: {
      const double s2 = kE * eps_ / (sigma_ * sigma_);
      return {1.0, 0.0, s2 - lambda_ / 3.0, 0.0,
              -kE * eps_ / std::pow(sigma_, 4) - lambda_ / 3.0 * s2};
    }
    case ProfileKind::tabulated: {
      const SplineData& s = *spline_;
      return {1.0, s.b[0], s.c[0], s.d[0], 0.0};
    }
    case ProfileKind::schwarzschild_de_sitter_capped:
      throw std::domain_error("taylor0: capped profile has no pole chart");
  }
  throw std::logic_error("unreachable");
}

double RadialProfile::cap_radius() const {
  if (kind_ != ProfileKind::schwarzschild_de_sitter_capped)
    throw std::domain_error("cap_radius: not a capped profile");
  return cap_radius_;
}

double RadialProfile::inner_radius() const {
  return kind_ == ProfileKind::schwarzschild_de_sitter_capped ? cap_radius_ : 0.0;
}

std::string RadialProfile::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case ProfileKind::de_sitter:
      os << "de-sitter(lambda=" << lambda_ << ")";
      break;
    case ProfileKind::schwarzschild_de_sitter_capped:
      os << "sds(lambda=" << lambda_ << ", m=" << m_ << ")";
      break;
    case ProfileKind::constant_curvature:
      os << "constant-curvature(a=" << a_ << ")";
      break;
    case ProfileKind::perturbed:
      os << "perturbed(lambda=" << lambda_ << ", eps=" << eps_
         << ", sigma=" << sigma_ << ")";
      break;
    case ProfileKind::tabulated:
      os << "tabulated(n=" << spline_->x.size() << ")";
      break;
  }
  return os.str();
}

double scalar_curvature(const RadialProfile& profile, double r) {
  if (profile.kind() != ProfileKind::schwarzschild_de_sitter_capped &&
      r < 1e-3 * profile.r_max()) {
    const auto c = profile.taylor0();
    return -2.0 * (3.0 * c[2] + 4.0 * c[3] * r + 5.0 * c[4] * r * r);
  }
  const double phi = profile.phi(r);
  const double dphi = profile.dphi(r);
  return 2.0 * (1.0 - phi - r * dphi) / (r * r);
}

double mean_curvature(const RadialProfile& profile, double r) {
  const double ph = profile.phi_stable(r);
  return 2.0 / r * std::sqrt(std::max(ph, 0.0));
}

double dec_margin(const RadialProfile& profile, double lambda, std::size_t samples) {
  if (samples < 2) throw std::invalid_argument("dec_margin: need samples >= 2");
  double margin = std::numeric_limits<double>::infinity();
  const double lo = profile.inner_radius();
  const double hi = profile.r_max();
  if (lo == 0.0) margin = scalar_curvature(profile, 1e-6 * hi) - 2.0 * lambda;
  for (std::size_t i = 1; i <= samples; ++i) {
    const double r = lo + (hi - lo) * static_cast<double>(i) /
                              static_cast<double>(samples + 1);
    margin = std::min(margin, scalar_curvature(profile, r) - 2.0 * lambda);
  }
  return margin;
}

std::pair<double, double> sds_horizon_radii(double lambda, double m) {
  if (!(lambda > 0)) throw std::domain_error("sds_horizon_radii: lambda must be positive");
  const double m_extremal = 1.0 / (3.0 * std::sqrt(lambda));
  if (!(m > 0 && m < m_extremal))
    throw std::domain_error(
        "sds_horizon_radii: m must lie in (0, " + std::to_string(m_extremal) +
        ") for two positive horizon radii");
  auto P = [&](double r) { return r - lambda / 3.0 * r * r * r - 2.0 * m; };
  const double r_crit = 1.0 / std::sqrt(lambda);
  const double r_eq = std::sqrt(3.0 / lambda);
  double r_minus = find_root_bracketed(P, 1e-300, r_crit, 1e-14 * r_crit);
  double r_plus = find_root_bracketed(P, r_crit, r_eq, 1e-14 * r_eq);
  // Newton polish so that phi(R+-) is at machine-zero level
  for (int it = 0; it < 3; ++it) {
    r_minus -= P(r_minus) / (1.0 - lambda * r_minus * r_minus);
    r_plus -= P(r_plus) / (1.0 - lambda * r_plus * r_plus);
  }
  return {r_minus, r_plus};
}

ModelParams make_model_params(double lambda, double p) {
  if (!(p > 1.0 && p < 3.0))
    throw std::domain_error("make_model_params: p must lie in (1, 3)");
  ModelParams mp;
  mp.lambda = lambda;
  mp.p = p;
  if (lambda > 0) {
    mp.r_lambda = std::sqrt(3.0 / lambda);
    mp.t_lambda = std::log(3.0 / lambda);
  } else {
    mp.r_lambda = std::numeric_limits<double>::quiet_NaN();
    mp.t_lambda = std::numeric_limits<double>::quiet_NaN();
  }
  return mp;
}

}  // namespace curvmass
