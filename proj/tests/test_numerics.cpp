#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "curvmass/numerics.hpp"

using namespace curvmass;

namespace {

// deterministic generator for the property-style cases
struct SplitMix {
  std::uint64_t s;
  double next() {
    s += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z ^= z >> 31;
    return static_cast<double>(z >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * next(); }
};

}  // namespace

TEST_CASE("inverse-square-root endpoint") {
  auto f = [](double x) { return 1.0 / std::sqrt(1.0 - x); };
  const auto res = integrate_adaptive(f, 0.0, 1.0, 1e-12, SingularEnd::right_sqrt);
  CHECK(res.value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(res.evaluations > 0);
  CHECK(res.error_estimate >= 0.0);
}

TEST_CASE("model tail integral at p = 2") {
  // int_r^1 rho^{-2} / sqrt(1 - rho^2) d rho = sqrt(1 - r^2) / r
  auto f = [](double rho) { return 1.0 / (rho * rho * std::sqrt(1.0 - rho * rho)); };
  const auto res = integrate_adaptive(f, 0.5, 1.0, 1e-12, SingularEnd::right_sqrt);
  CHECK(res.value == doctest::Approx(2.0 * std::sqrt(0.75)).epsilon(1e-11));
}

TEST_CASE("polynomial") {
  auto f = [](double x) { return 3.0 * x * x; };
  CHECK(integrate_adaptive(f, 0.0, 1.0).value == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("left sqrt substitution") {
  auto f = [](double x) { return 1.0 / std::sqrt(x); };
  const auto res = integrate_adaptive(f, 0.0, 4.0, 1e-12, SingularEnd::left_sqrt);
  CHECK(res.value == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("additivity of panel integrals") {
  SplitMix rng{7};
  for (int trial = 0; trial < 25; ++trial) {
    const double a = rng.uniform(-2.0, 0.0);
    const double c = rng.uniform(0.5, 3.0);
    const double b = a + (c - a) * rng.uniform(0.1, 0.9);
    const double k = rng.uniform(0.5, 4.0);
    auto f = [k](double x) { return std::sin(k * x) + x * x; };
    const auto whole = integrate_adaptive(f, a, c, 1e-11);
    const auto l = integrate_adaptive(f, a, b, 1e-11);
    const auto r = integrate_adaptive(f, b, c, 1e-11);
    CHECK(std::abs(whole.value - (l.value + r.value)) <=
          whole.error_estimate + l.error_estimate + r.error_estimate + 1e-13);
  }
}

TEST_CASE("budget exhaustion reports the worst subinterval") {
  // more oscillations than the subdivision budget can resolve
  auto f = [](double x) { return std::sin(3e5 * x); };
  try {
    integrate_adaptive(f, 0.0, 1.0, 1e-12);
    FAIL("expected quadrature_error");
  } catch (const quadrature_error& e) {
    CHECK(e.worst_lo >= 0.0);
    CHECK(e.worst_hi <= 1.0);
    CHECK(e.worst_lo < e.worst_hi);
  }
}

TEST_CASE("a non-finite panel keeps demanding refinement until the budget ends") {
  auto f = [](double x) { return std::sqrt(x - 0.3); };  // NaN below 0.3
  try {
    integrate_adaptive(f, 0.0, 1.0, 1e-10);
    FAIL("expected quadrature_error");
  } catch (const quadrature_error& e) {
    CHECK(e.worst_hi <= 0.3 + 1e-6);
  }
}

TEST_CASE("exponential decay") {
  OdeRhs f = [](double, std::span<const double> y, std::span<double> dy) {
    dy[0] = -y[0];
  };
  const double y0[1] = {1.0};
  const auto path = solve_ivp(f, 0.0, std::span<const double>(y0, 1), 1.0, 1e-10);
  CHECK(path.nodes().back().y[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
  // dense output half-way
  CHECK(path.eval_component(0.5, 0) ==
        doctest::Approx(std::exp(-0.5)).epsilon(1e-8));
}

TEST_CASE("equilibrium of the structural system stays put") {
  // mu' at lambda = 0: alpha = mu = 1/(3-p) is an equilibrium
  const double p = 1.7;
  const double mu_eq = 1.0 / (3.0 - p);
  OdeRhs f = [p, mu_eq](double, std::span<const double> y, std::span<double> dy) {
    const double a = mu_eq;
    const double c53 = (5.0 - p) / (p - 1.0);
    const double c31 = (3.0 - p) / (p - 1.0);
    dy[0] = c53 * a * a - (c53 * a + 1.0 / (p - 1.0)) * y[0] + c31 * y[0] * y[0];
  };
  const double y0[1] = {mu_eq};
  const auto path = solve_ivp(f, -20.0, std::span<const double>(y0, 1), 20.0, 1e-10);
  for (const auto& node : path.nodes())
    CHECK(node.y[0] == doctest::Approx(mu_eq).epsilon(1e-9));
}

TEST_CASE("blow-up raises a step-underflow error") {
  OdeRhs f = [](double, std::span<const double> y, std::span<double> dy) {
    dy[0] = y[0] * y[0];
  };
  const double y0[1] = {1.0};
  try {
    solve_ivp(f, 0.0, std::span<const double>(y0, 1), 2.0, 1e-9);
    FAIL("expected ode_error");
  } catch (const ode_error& e) {
    CHECK(e.last_t > 0.9);
    CHECK(e.last_t <= 1.05);
  }
}

TEST_CASE("linear systems match the matrix-exponential reference") {
  // rotation
  {
    OdeRhs f = [](double, std::span<const double> y, std::span<double> dy) {
      dy[0] = y[1];
      dy[1] = -y[0];
    };
    const double y0[2] = {1.0, 0.0};
    const double rel = 1e-9;
    const auto path = solve_ivp(f, 0.0, std::span<const double>(y0, 2), 3.0, rel);
    CHECK(std::abs(path.nodes().back().y[0] - std::cos(3.0)) <= 10 * rel);
    CHECK(std::abs(path.nodes().back().y[1] + std::sin(3.0)) <= 10 * rel);
  }
  // diagonalizable contraction: y(t) = 2 e^{-t} (1,0) - e^{-3t} (1,-1)
  {
    OdeRhs f = [](double, std::span<const double> y, std::span<double> dy) {
      dy[0] = -y[0] + 2.0 * y[1];
      dy[1] = -3.0 * y[1];
    };
    const double y0[2] = {1.0, 1.0};
    const double rel = 1e-9;
    const auto path = solve_ivp(f, 0.0, std::span<const double>(y0, 2), 2.0, rel);
    const double e1 = std::exp(-2.0), e3 = std::exp(-6.0);
    CHECK(std::abs(path.nodes().back().y[0] - (2.0 * e1 - e3)) <= 10 * rel);
    CHECK(std::abs(path.nodes().back().y[1] - e3) <= 10 * rel);
  }
}

TEST_CASE("backward integration") {
  OdeRhs f = [](double, std::span<const double> y, std::span<double> dy) {
    dy[0] = -y[0];
  };
  const double y0[1] = {std::exp(-1.0)};
  const auto path = solve_ivp(f, 1.0, std::span<const double>(y0, 1), 0.0, 1e-10);
  CHECK(path.t_front() == doctest::Approx(0.0));
  CHECK(path.eval_component(0.0, 0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("sqrt(2)") {
  auto f = [](double x) { return x * x - 2.0; };
  CHECK(find_root_bracketed(f, 1.0, 2.0, 1e-14) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
}

TEST_CASE("horizon polynomial root against a 60-step bisection oracle") {
  auto f = [](double r) { return r - r * r * r - 0.2; };
  double lo = 0.5, hi = 1.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    ((f(mid) > 0) == (f(lo) > 0) ? lo : hi) = mid;
  }
  const double oracle = 0.5 * (lo + hi);
  CHECK(find_root_bracketed(f, 0.5, 1.0, 1e-14) ==
        doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("monotone inversion round trip") {
  SplitMix rng{99};
  for (int trial = 0; trial < 25; ++trial) {
    const double a = rng.uniform(0.5, 3.0);
    const double b = rng.uniform(0.1, 2.0);
    auto f = [a, b](double x) { return a * x * x * x + b * x; };  // increasing
    const double x_true = rng.uniform(-1.5, 1.5);
    const double y = f(x_true);
    const double x = find_root_bracketed([&](double v) { return f(v) - y; },
                                         -2.0, 2.0, 1e-14);
    CHECK(x == doctest::Approx(x_true).epsilon(1e-10));
  }
}

TEST_CASE("missing sign change") {
  CHECK_THROWS_AS(find_root_bracketed([](double) { return 1.0; }, 0.0, 1.0, 1e-12),
                  bracket_error);
}

TEST_CASE("root sits inside its final bracket") {
  auto f = [](double x) { return std::tanh(3.0 * (x - 0.37)); };
  const double tol = 1e-11;
  const double x = find_root_bracketed(f, -1.0, 2.0, tol);
  CHECK(((f(x - tol) <= 0.0 && f(x + tol) >= 0.0) || std::abs(f(x)) < 1e-14));
}
