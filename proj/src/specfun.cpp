#include "curvmass/specfun.hpp"

#include <cmath>
#include <cstddef>

namespace curvmass::specfun {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kLogSqrt2Pi = 0.91893853320467274178032973640562;

// Lanczos, g = 7, 9 terms.
constexpr double kLanczos[9] = {
    0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
    771.32342877765313,       -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};

double log_gamma_lanczos(double x) {
  // valid for x >= 0.5
  const double z = x - 1.0;
  double sum = kLanczos[0];
  for (int i = 1; i < 9; ++i) sum += kLanczos[i] / (z + i);
  const double base = z + 7.5;
  return kLogSqrt2Pi + (z + 0.5) * std::log(base) - base + std::log(sum);
}

// sin(pi x) with argument reduction done on x itself.
double sin_pi(double x) {
  double f = x - std::floor(x);
  int parity = static_cast<int>(std::fmod(std::floor(x), 2.0));
  double s = std::sin(kPi * f);
  return (parity == 0 || parity == -2) ? s : -s;
}

bool is_nonpositive_integer(double x) {
  return x <= 0.0 && x == std::floor(x);
}

// Raw power series of 2F1; caller guarantees convergence (|x| < 1 and c not
// a nonpositive integer).  Pochhammer products updated incrementally.
double series_2f1(double a, double b, double c, double x) {
  double term = 1.0, sum = 1.0;
  double max_mag = 1.0;
  const std::size_t budget = 200000;
  for (std::size_t k = 0; k < budget; ++k) {
    const double kk = static_cast<double>(k);
    term *= (a + kk) * (b + kk) / ((c + kk) * (kk + 1.0)) * x;
    sum += term;
    max_mag = std::max(max_mag, std::abs(sum));
    if (std::abs(term) <= 1e-17 * std::abs(sum) + 1e-300) return sum;
  }
  throw series_error("2F1 series did not converge within budget (a=" +
                     std::to_string(a) + ", b=" + std::to_string(b) +
                     ", c=" + std::to_string(c) + ", x=" + std::to_string(x) +
                     ")");
}

struct SignedLog {
  double lg;
  int sign;
};

SignedLog slg(double x) {
  SignedLogGamma g = log_gamma_signed(x);
  return {g.log_abs, g.sign};
}

// Gamma(c)Gamma(s)/(Gamma(u)Gamma(v)) through signed log Gammas.
double gamma_ratio4(double c, double s, double u, double v) {
  SignedLog lc = slg(c), ls = slg(s), lu = slg(u), lv = slg(v);
  const double lg = lc.lg + ls.lg - lu.lg - lv.lg;
  const int sign = lc.sign * ls.sign * lu.sign * lv.sign;
  return sign * std::exp(lg);
}

constexpr double kSwitchX = 0.75;

// Connection-formula evaluation for x in [0.75, 1); requires c-a-b
// non-integer.
double hyp2f1_connection(double a, double b, double c, double x) {
  const double y = 1.0 - x;
  const double s = c - a - b;
  if (std::abs(s - std::round(s)) < 1e-8)
    throw std::domain_error("hyp2f1: connection formula needs non-integer c-a-b");
  const double g1 = gamma_ratio4(c, s, c - a, c - b);
  const double g2 = gamma_ratio4(c, -s, a, b);
  return g1 * series_2f1(a, b, 1.0 - s, y) +
         g2 * std::pow(y, s) * series_2f1(c - a, c - b, 1.0 + s, y);
}

}  // namespace

double log_gamma(double x) {
  if (is_nonpositive_integer(x))
    throw pole_error("log_gamma: pole at x = " + std::to_string(x));
  if (x <= 0.0)
    throw std::domain_error("log_gamma: x must be positive (use log_gamma_signed)");
  if (x < 0.5)
    return std::log(kPi / sin_pi(x)) - log_gamma_lanczos(1.0 - x);
  return log_gamma_lanczos(x);
}

SignedLogGamma log_gamma_signed(double x) {
  if (is_nonpositive_integer(x))
    throw pole_error("log_gamma_signed: pole at x = " + std::to_string(x));
  if (x > 0.0) return {log_gamma(x), 1};
  // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
  const double sp = sin_pi(x);
  const double la = std::log(kPi / std::abs(sp)) - log_gamma(1.0 - x);
  return {la, sp > 0 ? 1 : -1};
}

HyperParams hyper_params(double p) {
  if (!(p > 1.0 && p <= 3.0))
    throw std::domain_error("hyper_params: p must lie in (1, 3]");
  const double pm1 = p - 1.0;
  const double disc = std::sqrt(4.0 + 12.0 * pm1 - 3.0 * pm1 * pm1);
  HyperParams h;
  h.a = (3.0 - p + disc) / (4.0 * pm1);
  h.b = (3.0 - p - disc) / (4.0 * pm1);
  h.c = p / pm1;
  h.p = p;
  return h;
}

double hyp2f1(double a, double b, double c, double x) {
  if (!(x >= 0.0 && x < 1.0))
    throw std::domain_error("hyp2f1: x must lie in [0, 1)");
  if (c <= 1e-12 && std::abs(c - std::round(c)) < 1e-12)
    throw pole_error("hyp2f1: c at or near a nonpositive integer");
  if (a == 0.0 || b == 0.0 || x == 0.0) return 1.0;
  if (x < kSwitchX) return series_2f1(a, b, c, x);
  return hyp2f1_connection(a, b, c, x);
}

double gauss_at_one(double a, double b, double c) {
  const double s = c - a - b;
  if (!(s > 0.0))
    throw std::domain_error("gauss_at_one: series diverges, c-a-b <= 0");
  return gamma_ratio4(c, s, c - a, c - b);
}

UpsilonValue upsilon_pair(double p, double x) {
  if (!(p > 1.0 && p < 3.0))
    throw std::domain_error("upsilon_pair: p must lie in (1, 3)");
  if (!(x >= 0.0 && x <= 1.0))
    throw std::domain_error("upsilon_pair: x must lie in [0, 1]");
  const HyperParams h = hyper_params(p);
  const double dcoef = -(5.0 - p) / (4.0 * p);
  if (x == 1.0) {
    return {gauss_at_one(h.a, h.b, h.c),
            dcoef * gauss_at_one(h.a + 1, h.b + 1, h.c + 1)};
  }
  return {hyp2f1(h.a, h.b, h.c, x),
          dcoef * hyp2f1(h.a + 1, h.b + 1, h.c + 1, x)};
}

double upsilon_second(double p, double x) {
  const HyperParams h = hyper_params(p);
  const double coef =
      -(5.0 - p) / (4.0 * p) * (h.a + 1) * (h.b + 1) / (h.c + 1);
  if (x == 1.0) return coef * gauss_at_one(h.a + 2, h.b + 2, h.c + 2);
  return coef * hyp2f1(h.a + 2, h.b + 2, h.c + 2, x);
}

double upsilon_value_xy(double p, double x, double y) {
  const HyperParams h = hyper_params(p);
  if (x < kSwitchX) return hyp2f1(h.a, h.b, h.c, x);
  const double u1 = gamma_ratio4(h.c, 1.5, h.a + 1.5, h.b + 1.5);
  const double u2 = gamma_ratio4(h.c, -1.5, h.a, h.b);
  if (y <= 0.0) return u1;
  return u1 * series_2f1(h.a, h.b, -0.5, y) +
         u2 * y * std::sqrt(y) * series_2f1(h.a + 1.5, h.b + 1.5, 2.5, y);
}

double upsilon_boundary_combo(double p, double x) {
  return upsilon_boundary_combo_xy(p, x, 1.0 - x);
}

double upsilon_boundary_combo_xy(double p, double x, double y) {
  if (!(p > 1.0 && p < 3.0))
    throw std::domain_error("upsilon_boundary_combo: p must lie in (1, 3)");
  if (!(x >= 0.0 && x <= 1.0))
    throw std::domain_error("upsilon_boundary_combo: x must lie in [0, 1]");
  const HyperParams h = hyper_params(p);
  const double kappa = (p - 1.0) / (5.0 - p);
  if (x < kSwitchX) {
    UpsilonValue uv = upsilon_pair(p, x);
    return (uv.y + 2.0 * kappa * x * uv.dy) / std::sqrt(y);
  }
  // Assemble from the 1-x side.  Using
  //   Y      = U1 F(a,b,-1/2;y)           + U2 y^{3/2} F(a+3/2,b+3/2,5/2;y)
  //   Y'     = -[(5-p)/(4p)] { V1 F(a+1,b+1,1/2;y) + V2 y^{1/2} F(a+3/2,b+3/2,3/2;y) }
  // with U1 = [(p-1)/(2p)] V1, the combination collapses to
  //   [Y + 2 kappa x Y'] / sqrt(y)
  //     = U1 [ (F1-F2)(y) + y F2(y) ] / sqrt(y) + U2 y F3(y)
  //       - [(p-1)/(2p)] x V2 F4(y),
  // where F1-F2 is summed term by term starting at order y.
  const double a = h.a, b = h.b, c = h.c;
  const double u1 = gamma_ratio4(c, 1.5, a + 1.5, b + 1.5);
  const double u2 = gamma_ratio4(c, -1.5, a, b);
  const double v2 = gamma_ratio4(c + 1, -0.5, a + 1, b + 1);

  // (F1 - F2)(y) = sum_{k>=1} [ (a)_k(b)_k/(-1/2)_k - (a+1)_k(b+1)_k/(1/2)_k ] y^k / k!
  // The bracket is a difference and can cross zero at isolated k, so the
  // stopping rule demands several consecutive negligible terms.
  double p1 = 1.0, p2 = 1.0, yk = 1.0, kfact = 1.0, diff = 0.0;
  int quiet = 0;
  for (std::size_t k = 0; k < 200000 && quiet < 4; ++k) {
    const double kk = static_cast<double>(k);
    p1 *= (a + kk) * (b + kk) / (-0.5 + kk);
    p2 *= (a + 1 + kk) * (b + 1 + kk) / (0.5 + kk);
    yk *= y;
    kfact *= (kk + 1.0);
    const double term = (p1 - p2) * yk / kfact;
    diff += term;
    const double bound = (std::abs(p1) + std::abs(p2)) * yk / kfact;
    quiet = bound <= 1e-17 * (std::abs(diff) + 1.0) ? quiet + 1 : 0;
  }
  const double f2 = series_2f1(a + 1, b + 1, 0.5, y);
  const double f3 = series_2f1(a + 1.5, b + 1.5, 2.5, y);
  const double f4 = series_2f1(a + 1.5, b + 1.5, 1.5, y);
  double out = u2 * y * f3 - (p - 1.0) / (2.0 * p) * x * v2 * f4;
  if (y > 0.0) out += u1 * (diff + y * f2) / std::sqrt(y);
  return out;
}

UpsilonValue upsilon_pair_ext(double p, double x) {
  if (x >= 0.0) return upsilon_pair(p, x);
  if (!(x > -1.0))
    throw std::domain_error("upsilon_pair_ext: x must lie in (-1, 1]");
  const HyperParams h = hyper_params(p);
  const double dcoef = -(5.0 - p) / (4.0 * p);
  return {series_2f1(h.a, h.b, h.c, x),
          dcoef * series_2f1(h.a + 1, h.b + 1, h.c + 1, x)};
}

double k_p(double p) {
  const HyperParams h = hyper_params(p);
  return gamma_ratio4(h.c, 0.5, h.a + 1.5, h.b + 1.5);
}

double gamma_ratio_lambda(double p) {
  const HyperParams h = hyper_params(p);
  return gamma_ratio4(h.c, 0.5, h.a + 1, h.b + 1);
}

double gamma_ratio_mu(double p) {
  const HyperParams h = hyper_params(p);
  SignedLog l1 = slg(h.a + 1), l2 = slg(h.b + 1), l3 = slg(h.a + 1.5),
            l4 = slg(h.b + 1.5);
  return l1.sign * l2.sign * l3.sign * l4.sign *
         std::exp(l1.lg + l2.lg - l3.lg - l4.lg);
}

}  // namespace curvmass::specfun
