#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "curvmass/pgreen.hpp"

using namespace curvmass;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

RadialProfile flat_profile(double r_max) {
  std::vector<double> r, phi;
  for (int i = 0; i <= 50; ++i) {
    r.push_back(r_max * i / 50.0);
    phi.push_back(1.0);
  }
  return RadialProfile::tabulated(r, phi);
}
}  // namespace

TEST_CASE("flat profile reproduces the power-law Green's function") {
  // phi == 1 on [0, R] (wall): u(r) = (p-1)/(3-p) (r^{-e} - R^{-e}),
  // e = (3-p)/(p-1)
  const auto prof = flat_profile(2.0);
  for (double p : {1.5, 2.0, 2.5}) {
    RadialGreen green(prof, p);
    const double e = (3.0 - p) / (p - 1.0);
    for (double r : {0.01, 0.3, 1.0, 1.9}) {
      const double expected =
          (p - 1.0) / (3.0 - p) * (std::pow(r, -e) - std::pow(2.0, -e));
      CHECK(green.u(r) == doctest::Approx(expected).epsilon(1e-11));
    }
  }
}

TEST_CASE("de Sitter p = 2 closed form") {
  RadialGreen green(RadialProfile::de_sitter(3.0), 2.0);
  for (double r : {0.02, 0.3, 0.5, 0.8, 0.97}) {
    const double expected = std::sqrt(1.0 - r * r) / r;
    CHECK(green.u(r) == doctest::Approx(expected).epsilon(1e-11));
    CHECK(green.log_u(r) == doctest::Approx(std::log(expected)).epsilon(1e-10));
  }
  CHECK(green.u(0.5) == doctest::Approx(1.7320508075688772).epsilon(1e-11));
  CHECK(green.u(1.0) == 0.0);
  CHECK(green.u(1.5) == 0.0);
}

TEST_CASE("gradient norm of u is profile independent") {
  RadialGreen g1(RadialProfile::de_sitter(3.0), 2.0);
  CHECK(g1.grad_norm_u(0.5) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(g1.grad_norm_u(1.0) == doctest::Approx(1.0).epsilon(1e-14));
  RadialGreen g2(RadialProfile::de_sitter(0.3), 1.5);
  CHECK(g2.grad_norm_u(1.0) == doctest::Approx(1.0).epsilon(1e-14));
  RadialGreen g3(flat_profile(3.0), 2.5);
  CHECK(g3.grad_norm_u(1.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("w and its gradient on the de Sitter p = 2 model") {
  RadialGreen green(RadialProfile::de_sitter(3.0), 2.0);
  for (double r : {0.2, 0.5, 0.9}) {
    const auto [w, gw] = green.w_and_grad(r);
    const double u = std::sqrt(1.0 - r * r) / r;
    CHECK(w == doctest::Approx(-std::log(u)).epsilon(1e-10));
    CHECK(gw == doctest::Approx(1.0 / (r * r * u)).epsilon(1e-10));
    // flux identity with the recomputed u
    const double flux = std::exp(-w) * gw * 4.0 * kPi * r * r;
    CHECK(flux == doctest::Approx(4.0 * kPi).epsilon(1e-11));
  }
}

TEST_CASE("flux constancy across profiles, exponents and levels") {
  const std::vector<RadialProfile> profiles = {
      RadialProfile::de_sitter(3.0),
      RadialProfile::constant_curvature(1.1),
      RadialProfile::perturbed(3.0, -0.05, 0.6),
  };
  for (const auto& prof : profiles) {
    for (double p : {1.2, 2.0, 2.8}) {
      RadialGreen green(prof, p);
      for (double t = -20.0; t <= 20.0; t += 4.0) {
        const auto lv = green.level_at(t);
        // e^{-t} |grad w|^{p-1} 4 pi r^2 / (4 pi (p-1)^{p-1}) - 1
        //   = expm1(-t - (p-1) log u_recomputed(r(t)))
        const double dev = std::expm1(-t - (p - 1.0) * green.log_u_recomputed_at(lv));
        CHECK(std::abs(dev) < 1e-10);
      }
    }
  }
}

TEST_CASE("p-Laplace flux is exactly one in the closed form") {
  const auto prof = RadialProfile::perturbed(3.0, -0.05, 0.6);
  for (double p : {1.3, 2.2}) {
    const double q = 1.0 / (p - 1.0);
    for (double r : {0.1, 0.4, 0.8}) {
      // r^2 phi^{(p-1)/2} |u'|^{p-1} with u' = -r^{-2/(p-1)} / sqrt(phi)
      const double du = std::pow(r, -2.0 * q) / std::sqrt(prof.phi(r));
      const double flux =
          r * r * std::pow(prof.phi(r), (p - 1.0) / 2.0) * std::pow(du, p - 1.0);
      CHECK(flux == doctest::Approx(1.0).epsilon(1e-12));
      // and its radial derivative vanishes
      const double h = 1e-5;
      auto flux_at = [&](double rr) {
        const double duu = std::pow(rr, -2.0 * q) / std::sqrt(prof.phi(rr));
        return rr * rr * std::pow(prof.phi(rr), (p - 1.0) / 2.0) *
               std::pow(duu, p - 1.0);
      };
      CHECK(std::abs((flux_at(r + h) - flux_at(r - h)) / (2.0 * h)) < 1e-9);
    }
  }
}

TEST_CASE("near-pole asymptotics of u") {
  // For p <= 2 the constant term of u is swamped by the leading power well
  // before r = 1e-4 r_max; for 2 < p < 3 the leading power grows so slowly
  // that only the O(r^{(3-p)/(p-1)}) band holds.
  for (double p : {1.4, 2.0, 2.6}) {
    RadialGreen green(RadialProfile::de_sitter(3.0), p);
    double prev_dev = 1e9;
    for (double frac : {1e-4, 1e-6}) {
      const double r = frac * green.r_max();
      const double scaled = std::exp(green.log_u(r) +
                                     (3.0 - p) / (p - 1.0) * std::log(r)) *
                            (3.0 - p) / (p - 1.0);
      const double dev = std::abs(scaled - 1.0);
      const double band =
          p <= 2.0 ? 1e-3 : 5.0 * std::pow(r, (3.0 - p) / (p - 1.0));
      CHECK(dev < band);
      CHECK(dev < prev_dev);
      prev_dev = dev;
    }
  }
}

TEST_CASE("level inversion round trip") {
  for (double p : {1.5, 2.0, 2.5}) {
    RadialGreen green(RadialProfile::de_sitter(3.0), p);
    for (double t = -20.0; t <= 20.0; t += 2.5) {
      const auto lv = green.level_at(t);
      const double w_back = -(p - 1.0) * green.log_u_recomputed_at(lv);
      CHECK(w_back == doctest::Approx(t).epsilon(1e-10).scale(1.0));
    }
  }
}

TEST_CASE("levels approach the equator as t grows") {
  RadialGreen green(RadialProfile::de_sitter(3.0), 2.0);
  const auto lv = green.level_at(25.0);
  CHECK(lv.in_boundary_zone());
  CHECK(lv.gap > 0.0);
  CHECK(lv.r == doctest::Approx(1.0).epsilon(1e-8));
  // u ~ 2 R^{-2/(p-1)} sqrt(gap / |phi'(R)|) near a simple zero of phi:
  // gap ~ e^{-2t} |phi'| / 4 at p = 2, R = 1
  CHECK(lv.gap ==
        doctest::Approx(std::exp(-50.0) * 6.0 / 4.0).epsilon(1e-4));
  CHECK(green.mean_curvature_at(lv) ==
        doctest::Approx(2.0 * std::sqrt(6.0 * lv.gap)).epsilon(1e-6));
}

TEST_CASE("deep negative levels use the pole series") {
  RadialGreen green(RadialProfile::perturbed(3.0, -0.005, 0.6), 1.5);
  const auto lv = green.level_at(-30.0);
  CHECK(lv.r < 1e-3 * green.r_max());
  CHECK(lv.r == doctest::Approx(std::exp(lv.log_r)).epsilon(1e-14));
  const double w_back = -(0.5) * green.log_u_recomputed_at(lv);
  CHECK(w_back == doctest::Approx(-30.0).epsilon(1e-11));
}

TEST_CASE("levels survive past the gap variable's underflow") {
  // gap ~ e^{-2t/(p-1)} leaves double range near t = 18 at p = 1.05; the
  // leading form of the boundary expansion takes over there
  RadialGreen green(RadialProfile::de_sitter(3.0), 1.05);
  double prev_log_gap = 0.0;
  for (double t : {15.0, 18.0, 21.0, 24.0}) {
    const auto lv = green.level_at(t);
    CHECK(lv.in_boundary_zone());
    CHECK(std::isfinite(lv.log_gap));
    CHECK(lv.log_gap < prev_log_gap);
    prev_log_gap = lv.log_gap;
    const double dev = std::expm1(-t - 0.05 * green.log_u_recomputed_at(lv));
    CHECK(std::abs(dev) < 1e-9);
    const double h_expected =
        2.0 * std::exp(0.5 * (std::log(6.0) + lv.log_gap) - lv.log_r);
    CHECK(green.mean_curvature_at(lv) ==
          doctest::Approx(h_expected).epsilon(1e-6));
  }
  // the same depth on a wall profile
  RadialGreen wall(RadialProfile::constant_curvature(2.4, 0.5), 1.05);
  const auto lv = wall.level_at(24.0);
  CHECK(lv.in_boundary_zone());
  CHECK(std::isfinite(lv.log_gap));
  CHECK(std::abs(std::expm1(-24.0 - 0.05 * wall.log_u_recomputed_at(lv))) < 1e-9);
}

TEST_CASE("hint-accelerated inversion matches the cold path") {
  RadialGreen green(RadialProfile::constant_curvature(1.1), 2.2);
  RadialGreen::Level hint = green.level_at(0.0);
  for (double t : {0.1, 0.2, 0.5, 1.0}) {
    const auto cold = green.level_at(t);
    const auto warm = green.level_at(t, hint);
    CHECK(warm.r == doctest::Approx(cold.r).epsilon(1e-12));
    hint = warm;
  }
}

TEST_CASE("capped Schwarzschild-de Sitter profiles are rejected") {
  CHECK_THROWS_AS(
      RadialGreen(RadialProfile::schwarzschild_de_sitter_capped(3.0, 0.1), 2.0),
      std::domain_error);
  CHECK_THROWS_AS(RadialGreen(RadialProfile::de_sitter(3.0), 1.0),
                  std::domain_error);
  CHECK_THROWS_AS(RadialGreen(RadialProfile::de_sitter(3.0), 3.0),
                  std::domain_error);
}
