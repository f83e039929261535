#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "curvmass/mass.hpp"
#include "curvmass/numerics.hpp"
#include "curvmass/specfun.hpp"

using namespace curvmass;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

std::vector<double> grid(double a, double b, std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return g;
}

RadialProfile flatish() {
  std::vector<double> r, phi;
  for (int i = 0; i <= 40; ++i) {
    r.push_back(2.0 * i / 40.0);
    phi.push_back(1.0);
  }
  return RadialProfile::tabulated(r, phi);
}
}  // namespace

TEST_CASE("Hawking mass anchors") {
  const double lambda = 3.0;
  // Clifford torus: minimal, area 6 pi^2 / lambda
  const double clifford = hawking_mass(6.0 * kPi * kPi / lambda, 0.0, lambda);
  CHECK(clifford ==
        doctest::Approx(std::sqrt(3.0 * kPi / (8.0 * lambda)) * (1.0 - kPi / 2.0))
            .epsilon(1e-14));
  CHECK(clifford == doctest::Approx(-0.3576944).epsilon(1e-6));
  CHECK(clifford < 0.0);
  // centered spheres of the hemisphere carry zero mass
  const auto ds = RadialProfile::de_sitter(lambda);
  for (double r : {0.2, 0.5, 0.9, 0.999})
    CHECK(std::abs(hawking_mass_sphere(ds, r, lambda)) < 1e-12);
  // so does the equator (minimal, area 12 pi / lambda)
  CHECK(std::abs(hawking_mass(12.0 * kPi / lambda, 0.0, lambda)) < 1e-12);
  CHECK_THROWS_AS(hawking_mass(-1.0, 0.0, lambda), std::domain_error);
  CHECK_THROWS_AS(hawking_mass(1.0, -1.0, lambda), std::domain_error);
}

TEST_CASE("the sphere Hawking mass of Schwarzschild-de Sitter is the mass parameter") {
  const double lambda = 3.0, m = 0.1;
  const auto sds = RadialProfile::schwarzschild_de_sitter_capped(lambda, m);
  for (double f : {0.2, 0.5, 0.8}) {
    const double r = sds.cap_radius() + f * (sds.r_max() - sds.cap_radius());
    CHECK(hawking_mass_sphere(sds, r, lambda) == doctest::Approx(m).epsilon(1e-12));
  }
}

TEST_CASE("Geroch derivative of the sphere flow") {
  // r = e^{t/2} spheres: d/dt m_Haw = r^3 (R - 2 lambda)/8
  const double lambda = 3.0;
  const std::vector<RadialProfile> profs = {
      RadialProfile::de_sitter(lambda),
      RadialProfile::constant_curvature((2.0 * lambda + 0.6) / 6.0),
  };
  for (const auto& prof : profs) {
    for (double t : {-4.0, -2.0, -1.0}) {
      const double r = std::exp(t / 2.0);
      const double h = 1e-6;
      const double fd = (hawking_mass_sphere(prof, std::exp((t + h) / 2.0), lambda) -
                         hawking_mass_sphere(prof, std::exp((t - h) / 2.0), lambda)) /
                        (2.0 * h);
      CHECK(fd == doctest::Approx(hawking_geroch_rhs(prof, r, lambda))
                      .epsilon(1e-6)
                      .scale(1.0));
    }
  }
}

TEST_CASE("the reference hemisphere carries zero mass at every level") {
  const ModelParams mp = make_model_params(3.0, 2.0);
  MassEvaluator ev(RadialProfile::de_sitter(3.0), coefficients_closed_form(mp));
  const auto rows = ev.profile_rows(grid(-10.0, 10.0, 21));
  for (const auto& row : rows.rows) {
    CHECK(std::abs(row.mass) < 1e-7);
    CHECK(std::abs(row.dmdt_formula) < 1e-8);
    CHECK(row.area == doctest::Approx(4.0 * kPi * row.r * row.r).epsilon(1e-15));
  }
}

TEST_CASE("derivative identity along the grid") {
  const double lambda = 3.0;
  const auto prof = RadialProfile::constant_curvature((2.0 * lambda + 0.6) / 6.0);
  const ModelParams mp = make_model_params(lambda, 2.0);
  const auto rows =
      mass_profile(prof, coefficients_closed_form(mp), mp, grid(-8.0, 6.0, 29)).rows;
  for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
    CHECK(std::abs(rows[i].dmdt_num - rows[i].dmdt_formula) <=
          std::max(1e-6, 1e-4 * std::abs(rows[i].dmdt_formula)));
    CHECK(rows[i].mass >= rows[i - 1].mass - 1e-8);  // monotone under DEC
    CHECK(rows[i].dmdt_formula > 0.0);
  }
}

TEST_CASE("derivative formula dominates the curvature excess") {
  const double lambda = 3.0, delta = 0.6;
  const auto prof = RadialProfile::constant_curvature((2.0 * lambda + delta) / 6.0);
  const ModelParams mp = make_model_params(lambda, 1.6);
  MassEvaluator ev(prof, coefficients_closed_form(mp));
  for (double t : {-4.0, 0.0, 2.0}) {
    const auto lv = ev.green().level_at(t);
    const double lower = std::exp(ev.coeffs().lambda(t)) * delta / 2.0 * 4.0 *
                         kPi * lv.r * lv.r;
    CHECK(ev.derivative_rhs(t) >= lower * (1.0 - 1e-12));
    CHECK(ev.derivative_rhs(t) > 0.0);
  }
}

TEST_CASE("identity holds on a DEC-violating profile too") {
  const auto prof = RadialProfile::perturbed(3.0, -0.05, 0.6);
  CHECK(dec_margin(prof, 3.0, 256) < 0.0);
  const ModelParams mp = make_model_params(3.0, 2.0);
  const auto rows =
      mass_profile(prof, coefficients_closed_form(mp), mp, grid(-6.0, 6.0, 25)).rows;
  for (std::size_t i = 1; i + 1 < rows.size(); ++i)
    CHECK(std::abs(rows[i].dmdt_num - rows[i].dmdt_formula) <=
          std::max(1e-6, 1e-4 * std::abs(rows[i].dmdt_formula)));
}

TEST_CASE("coefficient/request contract") {
  const ModelParams built_for = make_model_params(3.0, 2.0);
  const ModelParams requested = make_model_params(3.0, 1.5);
  CHECK_THROWS_AS(mass_profile(RadialProfile::de_sitter(3.0),
                               coefficients_closed_form(built_for), requested,
                               grid(-2.0, 2.0, 5)),
                  std::invalid_argument);
}

TEST_CASE("small-sphere quotient") {
  const double lambda = 3.0, delta = 0.6;
  const auto prof = RadialProfile::constant_curvature((2.0 * lambda + delta) / 6.0);
  const ModelParams mp = make_model_params(lambda, 2.0);
  MassEvaluator ev(prof, coefficients_closed_form(mp));
  const double r = 5e-3 * prof.r_max();
  const double t = ev.green().w(r);
  const double volume =
      integrate_adaptive(
          [&prof](double rho) {
            return 4.0 * kPi * rho * rho / std::sqrt(prof.phi(rho));
          },
          0.0, r, 1e-12, SingularEnd::none, 1e-300)
          .value;
  CHECK(ev.mass_at(t) / volume ==
        doctest::Approx(delta / (16.0 * kPi)).epsilon(0.01));
}

TEST_CASE("polarized mass of the reference hemisphere vanishes") {
  for (double p : {1.3, 2.0, 2.7}) {
    const ModelParams mp = make_model_params(3.0, p);
    const auto b = polarized_mass(RadialProfile::de_sitter(3.0),
                                  coefficients_closed_form(mp));
    CHECK(std::abs(b.total) < 2e-5);
    CHECK(b.boundary_h_term == 0.0);  // minimal boundary
    CHECK(b.bulk == doctest::Approx(-mp.r_lambda / 4.0 * b.k_p).epsilon(2e-5).scale(1.0));
    CHECK(b.k_p == doctest::Approx(specfun::k_p(p)).epsilon(1e-14));
    CHECK(std::abs(b.upper_tail) < 1e-8);
    CHECK(b.second_summand <= b.second_summand_bound);
    CHECK(b.second_summand > 0.0);
  }
}

TEST_CASE("polarized mass is nonnegative on DEC profiles") {
  const ModelParams mp = make_model_params(3.0, 1.7);
  const auto b = polarized_mass(RadialProfile::constant_curvature(1.1),
                                coefficients_closed_form(mp));
  CHECK(b.total >= -1e-6);
  CHECK(b.second_summand <= b.second_summand_bound);
  CHECK(b.volume > 0.0);
}

TEST_CASE("polarized mass requires a positive constant") {
  const ModelParams mp = make_model_params(0.0, 2.0);
  MassEvaluator ev(flatish(), coefficients_closed_form(mp));
  CHECK_THROWS_AS(ev.polarized(), std::domain_error);
}

TEST_CASE("1-harmonic mass") {
  // the hemisphere itself: T* = T_Lambda gives zero
  CHECK(std::abs(one_harmonic_mass(3.0, std::log(1.0))) < 1e-14);
  CHECK(std::abs(one_harmonic_mass(0.3, std::log(10.0))) < 1e-14);
  // capped Schwarzschild-de Sitter returns its mass parameter
  for (auto [lambda, m] : std::vector<std::pair<double, double>>{
           {3.0, 0.05}, {3.0, 0.1}, {1.0, 0.3}}) {
    CHECK(one_harmonic_mass(lambda, sds_t_star(lambda, m)) ==
          doctest::Approx(m).epsilon(1e-9));
  }
  // wall below the equator: (R/2)(1 - lambda R^2/3) at R = e^{T*/2}
  const double t_star = 2.0 * std::log(0.8);
  CHECK(one_harmonic_mass(3.0, t_star) ==
        doctest::Approx(0.4 * (1.0 - 0.64)).epsilon(1e-12));
  CHECK(one_harmonic_mass(3.0, t_star) > 0.0);
  // stopping after the equator time clamps to zero mass
  CHECK(std::abs(one_harmonic_mass(3.0, 5.0)) < 1e-14);
  CHECK_THROWS_AS(one_harmonic_mass(-1.0, 0.0), std::domain_error);
}

TEST_CASE("a tabulated hemisphere behaves like the analytic one") {
  // clamped splines reproduce quadratic data exactly, so the whole level-set
  // pipeline should return the analytic zero mass
  std::vector<double> r, phi;
  const int n = 400;
  for (int i = 0; i <= n; ++i) {
    const double rr = static_cast<double>(i) / n;
    r.push_back(rr);
    phi.push_back(1.0 - rr * rr);
  }
  const auto prof = RadialProfile::tabulated(r, phi);
  CHECK(prof.boundary_kind() == BoundaryKind::equator);
  const ModelParams mp = make_model_params(3.0, 2.0);
  const auto rows =
      mass_profile(prof, coefficients_closed_form(mp), mp, grid(-8.0, 6.0, 15)).rows;
  for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
    CHECK(std::abs(rows[i].mass) < 1e-10);
    CHECK(std::abs(rows[i].dmdt_num - rows[i].dmdt_formula) < 1e-9);
  }
}

TEST_CASE("formal p -> 1 comparison against the sphere Hawking mass") {
  const auto table = formal_limit_experiment(RadialProfile::de_sitter(3.0), 3.0,
                                             -1.0, {1.5, 1.3, 1.2});
  CHECK(table.experimental);
  CHECK(!table.caveat.empty());
  for (const auto& row : table.rows) {
    CHECK(std::abs(row.m_p) < 1e-7);
    CHECK(std::abs(row.m_hawking) < 1e-12);
  }
  CHECK_THROWS_AS(
      formal_limit_experiment(RadialProfile::de_sitter(3.0), 3.0, 1.0, {1.5}),
      std::domain_error);
}
