#include "curvmass/numerics.hpp"

#include <cmath>

namespace curvmass {

void OdePath::push(double t, std::span<const double> y,
                   std::span<const double> dy) {
  Node n;
  n.t = t;
  n.y.assign(y.begin(), y.end());
  n.dy.assign(dy.begin(), dy.end());
  nodes_.push_back(std::move(n));
}

void OdePath::finalize_ascending() {
  if (nodes_.size() >= 2 && nodes_.front().t > nodes_.back().t)
    std::reverse(nodes_.begin(), nodes_.end());
}

std::vector<double> OdePath::eval(double t) const {
  std::vector<double> out(dimension());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = eval_component(t, i);
  return out;
}

double OdePath::eval_component(double t, std::size_t i) const {
  if (nodes_.empty()) throw std::logic_error("OdePath: empty path");
  if (t <= nodes_.front().t) return nodes_.front().y[i];
  if (t >= nodes_.back().t) return nodes_.back().y[i];
  std::size_t lo = 0, hi = nodes_.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    (nodes_[mid].t <= t ? lo : hi) = mid;
  }
  const Node& n0 = nodes_[lo];
  const Node& n1 = nodes_[hi];
  const double h = n1.t - n0.t;
  const double s = (t - n0.t) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  const double h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s);
  const double h11 = s * s * (s - 1);
  return h00 * n0.y[i] + h10 * h * n0.dy[i] + h01 * n1.y[i] + h11 * h * n1.dy[i];
}

namespace {

// Dormand-Prince coefficients
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// embedded 4th order weights
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

OdePath solve_ivp(const OdeRhs& f, double t0, std::span<const double> y0,
                  double t1, double rel_tol, double abs_tol) {
  if (t0 == t1) throw std::invalid_argument("solve_ivp: t0 == t1");
  const std::size_t n = y0.size();
  const double dir = t1 > t0 ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);

  std::vector<double> y(y0.begin(), y0.end()), ynew(n), yerr(n);
  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n);

  OdePath path;
  double t = t0;
  f(t, y, k1);
  path.push(t, y, k1);

  double h = dir * std::min(span, std::max(1e-6 * span, 1e-4));
  const std::size_t max_steps = 2'000'000;
  double err_prev = 1.0;

  for (std::size_t step = 0; step < max_steps; ++step) {
    if ((t - t1) * dir >= 0) break;
    if ((t + h - t1) * dir > 0) h = t1 - t;
    if (std::abs(h) < 32 * std::numeric_limits<double>::epsilon() *
                          std::max(std::abs(t), 1.0)) {
      throw ode_error("solve_ivp: step size underflow near t = " +
                          std::to_string(t) + " (blow-up or stiffness)",
                      t);
    }

    auto stage = [&](std::vector<double>& kk, double ct, auto&&... terms) {
      for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (terms(i) + ...);
      f(t + ct * h, tmp, kk);
    };
    stage(k2, c2, [&](std::size_t i) { return a21 * k1[i]; });
    stage(k3, c3, [&](std::size_t i) { return a31 * k1[i] + a32 * k2[i]; });
    stage(k4, c4,
          [&](std::size_t i) { return a41 * k1[i] + a42 * k2[i] + a43 * k3[i]; });
    stage(k5, c5, [&](std::size_t i) {
      return a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i];
    });
    stage(k6, 1.0, [&](std::size_t i) {
      return a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i];
    });
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                            b6 * k6[i]);
    f(t + h, ynew, k7);

    double err = 0;
    bool finite = true;
    for (std::size_t i = 0; i < n; ++i) {
      yerr[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                     e6 * k6[i] + e7 * k7[i]);
      const double sc =
          abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      const double r = yerr[i] / sc;
      err += r * r;
      finite = finite && std::isfinite(ynew[i]);
    }
    err = std::sqrt(err / static_cast<double>(n));

    if (finite && err <= 1.0) {
      t += h;
      y.swap(ynew);
      k1.swap(k7);
      path.push(t, y, k1);
      // PI controller
      const double fac = 0.9 * std::pow(err > 0 ? err : 1e-10, -0.7 / 5.0) *
                         std::pow(err_prev, 0.4 / 5.0);
      h *= std::clamp(fac, 0.2, 5.0);
      err_prev = err > 0 ? err : 1e-10;
    } else {
      const double fac =
          finite ? std::max(0.1, 0.9 * std::pow(err, -0.2)) : 0.1;
      h *= fac;
    }
  }
  if ((t - t1) * dir < 0)
    throw ode_error("solve_ivp: exceeded step budget near t = " +
                        std::to_string(t),
                    t);
  path.finalize_ascending();
  return path;
}

}  // namespace curvmass
