#pragma once

// Adaptive quadrature, embedded Runge-Kutta initial value solving and
// bracketed root finding.  Everything here is pure: no global state, safe
// for concurrent use.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace curvmass {

struct IntegrationResult {
  double value = 0.0;
  double error_estimate = 0.0;  // absolute
  std::size_t evaluations = 0;
};

enum class SingularEnd { none, left_sqrt, right_sqrt };

class quadrature_error : public std::runtime_error {
 public:
  quadrature_error(const std::string& msg, double lo, double hi)
      : std::runtime_error(msg), worst_lo(lo), worst_hi(hi) {}
  double worst_lo;
  double worst_hi;
};

class bracket_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ode_error : public std::runtime_error {
 public:
  ode_error(const std::string& msg, double t)
      : std::runtime_error(msg), last_t(t) {}
  double last_t;  // last time the solver could reach
};

namespace detail {

// Gauss-Kronrod 7-15 nodes/weights on [-1, 1].
inline constexpr double kGkNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
inline constexpr double kKronrodW[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
inline constexpr double kGaussW[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <class F>
inline void gk15(F&& f, double a, double b, double& value, double& err) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fc = f(c);
  double result_g = fc * kGaussW[3];
  double result_k = fc * kKronrodW[7];
  for (int j = 0; j < 7; ++j) {
    const double x = h * kGkNodes[j];
    const double f1 = f(c - x);
    const double f2 = f(c + x);
    result_k += kKronrodW[j] * (f1 + f2);
    if (j % 2 == 1) result_g += kGaussW[j / 2] * (f1 + f2);
  }
  value = result_k * h;
  err = std::abs((result_k - result_g) * h);
}

struct Interval {
  double a, b, value, err;
};

template <class F>
IntegrationResult adapt(F&& f, double a, double b, double rel_tol,
                        double abs_floor) {
  IntegrationResult out;
  std::vector<Interval> segs;
  auto sanitize = [](Interval& s) {
    // a non-finite panel must keep demanding refinement, not poison the sums
    if (!std::isfinite(s.value) || !std::isfinite(s.err)) {
      s.value = 0.0;
      s.err = std::numeric_limits<double>::infinity();
    }
  };
  {
    Interval s{a, b, 0, 0};
    gk15(f, a, b, s.value, s.err);
    sanitize(s);
    out.evaluations += 15;
    segs.push_back(s);
  }
  const std::size_t max_segments = 4096;
  for (;;) {
    double total = 0, toterr = 0;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < segs.size(); ++i) {
      total += segs[i].value;
      toterr += segs[i].err;
      if (segs[i].err > segs[worst].err) worst = i;
    }
    if (toterr <= std::max(rel_tol * std::abs(total), abs_floor)) {
      out.value = total;
      out.error_estimate = toterr;
      return out;
    }
    if (segs.size() >= max_segments) {
      throw quadrature_error(
          "adaptive quadrature did not converge after " +
              std::to_string(max_segments) + " subdivisions, worst [" +
              std::to_string(segs[worst].a) + ", " +
              std::to_string(segs[worst].b) + "]",
          segs[worst].a, segs[worst].b);
    }
    Interval w = segs[worst];
    const double m = 0.5 * (w.a + w.b);
    Interval left{w.a, m, 0, 0}, right{m, w.b, 0, 0};
    gk15(f, left.a, left.b, left.value, left.err);
    gk15(f, right.a, right.b, right.value, right.err);
    sanitize(left);
    sanitize(right);
    out.evaluations += 30;
    segs[worst] = left;
    segs.push_back(right);
  }
}

}  // namespace detail

// Integrate f over (a, b).  An inverse-square-root singularity at one
// endpoint is removed by the substitution s^2 = distance to that endpoint
// before adaptive subdivision starts.
template <class F>
IntegrationResult integrate_adaptive(F&& f, double a, double b,
                                     double rel_tol = 1e-10,
                                     SingularEnd singular_end = SingularEnd::none,
                                     double abs_floor = 1e-14) {
  if (!(a < b)) throw std::invalid_argument("integrate_adaptive: need a < b");
  switch (singular_end) {
    case SingularEnd::none:
      return detail::adapt(f, a, b, rel_tol, abs_floor);
    case SingularEnd::right_sqrt: {
      auto g = [&f, b](double s) { return 2.0 * s * f(b - s * s); };
      return detail::adapt(g, 0.0, std::sqrt(b - a), rel_tol, abs_floor);
    }
    case SingularEnd::left_sqrt: {
      auto g = [&f, a](double s) { return 2.0 * s * f(a + s * s); };
      return detail::adapt(g, 0.0, std::sqrt(b - a), rel_tol, abs_floor);
    }
  }
  throw std::logic_error("unreachable");
}

// Bracketed scalar root finding: bisection with secant acceleration.
// Returns x with bracket width <= tol (or an exact sign change hit).
template <class F>
double find_root_bracketed(F&& f, double lo, double hi, double tol = 1e-13) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0) return lo;
  if (fhi == 0) return hi;
  if ((flo > 0) == (fhi > 0))
    throw bracket_error("find_root_bracketed: no sign change on [" +
                        std::to_string(lo) + ", " + std::to_string(hi) + "]");
  double a = lo, b = hi, fa = flo, fb = fhi;
  for (int it = 0; it < 200; ++it) {
    if (std::abs(b - a) <= tol) break;
    // secant candidate, fall back to bisection when it leaves the bracket
    // or fails to shrink it fast enough
    double x = b - fb * (b - a) / (fb - fa);
    const double m = 0.5 * (a + b);
    if (!std::isfinite(x) || x <= std::min(a, b) || x >= std::max(a, b) ||
        std::abs(x - m) > 0.45 * std::abs(b - a)) {
      x = m;
    }
    const double fx = f(x);
    if (fx == 0) return x;
    if ((fx > 0) == (fb > 0)) {
      b = x;
      fb = fx;
    } else {
      a = b;
      fa = fb;
      b = x;
      fb = fx;
    }
    if (std::abs(fa) < std::abs(fb)) {
      std::swap(a, b);
      std::swap(fa, fb);
    }
  }
  return std::abs(fa) < std::abs(fb) ? a : b;
}

// Dense-output path of an ODE solution.  Nodes are stored with ascending t
// regardless of the direction of integration; evaluation between nodes is
// cubic Hermite on the stored derivatives.
class OdePath {
 public:
  struct Node {
    double t;
    std::vector<double> y;
    std::vector<double> dy;
  };

  const std::vector<Node>& nodes() const { return nodes_; }
  std::size_t dimension() const { return nodes_.empty() ? 0 : nodes_.front().y.size(); }
  double t_front() const { return nodes_.front().t; }
  double t_back() const { return nodes_.back().t; }

  std::vector<double> eval(double t) const;
  double eval_component(double t, std::size_t i) const;

  void push(double t, std::span<const double> y, std::span<const double> dy);
  void finalize_ascending();

 private:
  std::vector<Node> nodes_;
};

using OdeRhs =
    std::function<void(double t, std::span<const double> y, std::span<double> dy)>;

// Dormand-Prince 5(4) with PI step control.  Integrates from t0 to t1 in
// either direction; per-step error controlled against rel_tol (plus a small
// absolute floor).  Throws ode_error on step underflow, carrying the last
// reachable t.
OdePath solve_ivp(const OdeRhs& f, double t0, std::span<const double> y0,
                  double t1, double rel_tol = 1e-9, double abs_tol = 1e-12);

}  // namespace curvmass
