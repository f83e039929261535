#include "curvmass/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "curvmass/mass.hpp"
#include "curvmass/numerics.hpp"
#include "curvmass/pgreen.hpp"
#include "curvmass/specfun.hpp"
#include "curvmass/structural.hpp"

namespace curvmass::verify {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Accumulates sub-assertions of one check.  Every sub-tolerance is rescaled
// by the same factor when the check's primary tolerance is overridden, so a
// tightened override propagates to the whole check.
class Gauge {
 public:
  Gauge(double primary_tol, double scale) : primary_(primary_tol), scale_(scale) {}

  void expect(double deviation, double tol) {
    worst_ = std::max(worst_, std::abs(deviation) / (tol * scale_));
  }
  void expect_primary(double deviation) { expect(deviation, primary_); }
  void expect_true(bool ok) {
    if (!ok) worst_ = std::max(worst_, 2.0);
  }

  double value() const { return worst_ * primary_ * scale_; }
  double tol() const { return primary_ * scale_; }
  bool pass() const { return worst_ <= 1.0; }

 private:
  double primary_;
  double scale_;
  double worst_ = 0.0;
};

struct ProfileCase {
  RadialProfile profile;
  double lambda;  // reference cosmological constant for the DEC margin
};

// DEC-satisfying bundle: two reference hemispheres, two stiffer constant
// curvature caps (R - 2 Lambda = 0.6) and one non-constant-curvature bump
// read against a smaller reference constant.
std::vector<ProfileCase> bundled_dec_profiles() {
  std::vector<ProfileCase> out;
  out.push_back({RadialProfile::de_sitter(3.0), 3.0});
  out.push_back({RadialProfile::de_sitter(0.3), 0.3});
  out.push_back({RadialProfile::constant_curvature(1.1), 3.0});
  out.push_back({RadialProfile::constant_curvature(0.2), 0.3});
  out.push_back({RadialProfile::perturbed(3.0, -0.005, 0.6), 2.8});
  return out;
}

ProfileCase dec_violating_profile() {
  return {RadialProfile::perturbed(3.0, -0.05, 0.6), 3.0};
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

// ---------------------------------------------------------------- checks --

void check_upsilon(Gauge& g) {
  for (double p : {1.1, 1.5, 2.0, 2.5, 2.9}) {
    const auto h = specfun::hyper_params(p);
    for (double x = 0.01; x < 0.995; x += 0.02) {
      const auto uv = specfun::upsilon_pair(p, x);
      const double upp = specfun::upsilon_second(p, x);
      const double residual = x * (1.0 - x) * upp +
                              (h.c - (h.a + h.b + 1.0) * x) * uv.dy -
                              h.a * h.b * uv.y;
      g.expect_primary(residual);
    }
    const auto at0 = specfun::upsilon_pair(p, 0.0);
    g.expect(at0.y - 1.0, 1e-12);
    g.expect(at0.dy + (5.0 - p) / (4.0 * p), 1e-12);
    const auto at1 = specfun::upsilon_pair(p, 1.0);
    g.expect(at1.y + 2.0 * (p - 1.0) / (5.0 - p) * at1.dy, 1e-10);
  }
}

void check_gamma_ratios(Gauge& g) {
  auto ratio1 = [](double p) { return specfun::k_p(p) / (p - 1.0); };
  auto ratio2 = [](double p) {
    return specfun::gamma_ratio_lambda(p) /
           (3.0 * std::sqrt(kPi) / 4.0 * std::pow(p - 1.0, 1.5));
  };
  g.expect_primary(ratio1(1.05) - 1.0);
  g.expect_primary(ratio2(1.05) - 1.0);
  const std::vector<double> ps = {1.2, 1.1, 1.05, 1.02};
  for (std::size_t i = 0; i + 1 < ps.size(); ++i) {
    g.expect_true(std::abs(ratio1(ps[i + 1]) - 1.0) <
                  std::abs(ratio1(ps[i]) - 1.0));
    g.expect_true(std::abs(ratio2(ps[i + 1]) - 1.0) <
                  std::abs(ratio2(ps[i]) - 1.0));
  }
}

void check_route_agreement(Gauge& g) {
  for (double lambda : {0.3, 3.0}) {
    for (double p : {1.2, 1.5, 2.0, 2.5}) {
      const ModelParams mp = make_model_params(lambda, p);
      const auto cf = coefficients_closed_form(mp);
      // deep start: the alpha correction decays like e^{t/(p-1)}, so -20
      // leaves ~4e-6 in lambda's integration constant at p = 2.5
      const auto ode = coefficients_ode(mp, -30.0, 12.0);
      for (double t = -10.0; t <= 10.0 + 1e-9; t += 0.5) {
        g.expect_primary(ode.mu(t) - cf.mu(t));
        g.expect_primary(ode.lambda(t) - cf.lambda(t));
      }
    }
  }
  // exact formulas at lambda = 0
  for (double p : {1.5, 2.0, 2.5}) {
    const auto cf = coefficients_closed_form(make_model_params(0.0, p));
    for (double t : {-4.0, 0.0, 3.0}) {
      const double el_exact = std::pow((p - 1.0) / (3.0 - p), (p - 1.0) / (3.0 - p)) *
                              std::exp(t / (3.0 - p)) / (8.0 * kPi * (3.0 - p));
      g.expect(cf.exp_lambda(t) / el_exact - 1.0, 1e-9);
      g.expect(cf.mu(t) - 1.0 / (3.0 - p), 1e-9);
    }
  }
}

void check_de_sitter_zero_mass(Gauge& g) {
  const auto grid = linspace(-12.0, 12.0, 49);
  for (double p : {1.3, 2.0, 2.7}) {
    const ModelParams mp = make_model_params(3.0, p);
    MassEvaluator ev(RadialProfile::de_sitter(3.0), coefficients_closed_form(mp));
    const auto rows = ev.profile_rows(grid);
    for (const auto& row : rows.rows) g.expect_primary(row.mass);
    const auto pol = ev.polarized();
    g.expect(pol.total, 2e-5);
    g.expect(pol.bulk + mp.r_lambda / 4.0 * pol.k_p, 2e-5);
  }
  // second reference constant
  {
    const ModelParams mp = make_model_params(0.3, 2.0);
    MassEvaluator ev(RadialProfile::de_sitter(0.3), coefficients_closed_form(mp));
    for (double t : {-8.0, 0.0, 8.0}) g.expect_primary(ev.mass_at(t));
  }
}

void check_sds_one_harmonic(Gauge& g) {
  const std::pair<double, double> cases[] = {{3.0, 0.05}, {3.0, 0.1}, {1.0, 0.3}};
  for (auto [lambda, m] : cases) {
    const double value = one_harmonic_mass(lambda, sds_t_star(lambda, m));
    g.expect_primary(value - m);
    const auto [rm, rp] = sds_horizon_radii(lambda, m);
    auto phi = [&](double r) { return 1.0 - lambda * r * r / 3.0 - 2.0 * m / r; };
    g.expect(phi(rm), 1e-12);
    g.expect(phi(rp), 1e-12);
  }
}

void check_small_sphere(Gauge& g) {
  const double lambda = 3.0, delta = 0.6;
  const RadialProfile prof = RadialProfile::constant_curvature((2.0 * lambda + delta) / 6.0);
  const double expected = delta / (16.0 * kPi);
  for (double p : {1.5, 2.0}) {
    const ModelParams mp = make_model_params(lambda, p);
    MassEvaluator ev(prof, coefficients_closed_form(mp));
    for (double frac : {1e-2, 5e-3, 2e-3}) {
      const double r = frac * prof.r_max();
      const double t = ev.green().w(r);
      const double m = ev.mass_at(t);
      const double volume =
          integrate_adaptive(
              [&prof](double rho) {
                return 4.0 * kPi * rho * rho / std::sqrt(prof.phi(rho));
              },
              0.0, r, 1e-12, SingularEnd::none, 1e-300)
              .value;
      g.expect_primary(m / volume / expected - 1.0);
    }
  }
}

void check_monotonicity_identity(Gauge& g) {
  const auto grid = linspace(-12.0, 12.0, 49);
  auto run = [&](const ProfileCase& pc, double p, bool assert_monotone) {
    const ModelParams mp = make_model_params(pc.lambda, p);
    const auto rows =
        mass_profile(pc.profile, coefficients_closed_form(mp), mp, grid).rows;
    for (std::size_t i = 0; i + 1 < rows.size(); ++i)
      if (assert_monotone)
        g.expect_true(rows[i].mass <= rows[i + 1].mass + 1e-8);
    for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
      g.expect(rows[i].dmdt_num - rows[i].dmdt_formula,
               std::max(1e-6, 1e-4 * std::abs(rows[i].dmdt_formula)));
    }
  };
  for (const auto& pc : bundled_dec_profiles()) {
    // the reference hemispheres sit exactly on the margin; allow rounding
    g.expect_true(dec_margin(pc.profile, pc.lambda, 400) >= -1e-9);
    for (double p : {1.2, 1.5, 2.0, 2.5, 2.8}) run(pc, p, true);
  }
  const auto viol = dec_violating_profile();
  g.expect_true(dec_margin(viol.profile, viol.lambda, 400) < 0.0);
  for (double p : {1.5, 2.5}) run(viol, p, false);
}

void check_asymptotic_constants(Gauge& g) {
  const std::pair<double, double> cases[] = {{3.0, 2.0}, {0.3, 1.5}};
  const double t = 30.0;
  for (auto [lambda, p] : cases) {
    const ModelParams mp = make_model_params(lambda, p);
    const auto cf = coefficients_closed_form(mp);
    const double q = 1.0 / (p - 1.0);
    const double c_lambda = std::pow(mp.r_lambda, 2.0 * q) / (8.0 * kPi * (p - 1.0)) *
                            specfun::gamma_ratio_lambda(p);
    const double c_mu = std::pow(mp.r_lambda, (3.0 - p) * q) / (2.0 * (p - 1.0)) *
                        specfun::gamma_ratio_mu(p);
    g.expect_primary(std::exp(t * q + cf.lambda(t)) / c_lambda - 1.0);
    g.expect_primary(std::exp(t * q) * cf.mu(t) / c_mu - 1.0);
  }
}

void check_p_to_one_trends(Gauge& g) {
  const double lambda = 0.3;
  const std::vector<double> ps = {1.3, 1.2, 1.1, 1.05};
  {
    const auto table = p_limit_profiles(lambda, 1.0, ps);
    std::vector<double> gap_l, gap_m;
    for (const auto& row : table.rows) {
      gap_l.push_back(std::abs(row.exp_lambda - table.target_exp_lambda));
      gap_m.push_back(std::abs(row.mu_exp_lambda - table.target_mu_exp_lambda));
    }
    for (std::size_t i = 0; i + 1 < ps.size(); ++i) {
      g.expect_true(gap_l[i + 1] < gap_l[i]);
      g.expect_true(gap_m[i + 1] < gap_m[i]);
    }
  }
  {
    const auto table = p_limit_profiles(lambda, 3.0, ps);  // above T_Lambda
    for (std::size_t i = 0; i + 1 < ps.size(); ++i) {
      g.expect_true(table.rows[i + 1].exp_lambda < table.rows[i].exp_lambda);
      g.expect_true(table.rows[i + 1].mu_exp_lambda < table.rows[i].mu_exp_lambda);
    }
    g.expect_true(table.target_exp_lambda == 0.0);
  }
}

void check_hawking_anchors(Gauge& g) {
  const double lambda = 3.0;
  const double clifford = hawking_mass(6.0 * kPi * kPi / lambda, 0.0, lambda);
  const double closed = std::sqrt(3.0 * kPi / (8.0 * lambda)) * (1.0 - kPi / 2.0);
  g.expect_primary(clifford - closed);
  // literal anchor only to the digits the closed form actually has
  g.expect(clifford - (-0.3576944), 1e-6);
  const RadialProfile ds = RadialProfile::de_sitter(lambda);
  for (double frac : {0.3, 0.7, 0.99})
    g.expect_primary(hawking_mass_sphere(ds, frac * ds.r_max(), lambda));
  g.expect_primary(hawking_mass(12.0 * kPi / lambda, 0.0, lambda));
}

void check_flux_identity(Gauge& g) {
  auto cases = bundled_dec_profiles();
  cases.push_back(dec_violating_profile());
  for (const auto& pc : cases) {
    for (double p : {1.2, 2.0, 2.8}) {
      RadialGreen green(pc.profile, p);
      for (double t = -20.0; t <= 20.0 + 1e-9; t += 2.5) {
        const auto lv = green.level_at(t);
        const double lu = green.log_u_recomputed_at(lv);
        // e^{-t} |grad w|^{p-1} 4 pi r^2 / (4 pi (p-1)^{p-1}) collapses to
        // exp(-t - (p-1) log u(r(t)))
        g.expect_primary(std::expm1(-t - (p - 1.0) * lu));
      }
    }
  }
}

void check_finiteness_bound(Gauge& g) {
  auto cases = bundled_dec_profiles();
  for (const auto& pc : cases) {
    if (!(pc.lambda > 0.0)) continue;
    for (double p : {1.5, 2.5}) {
      const ModelParams mp = make_model_params(pc.lambda, p);
      const auto b = polarized_mass(pc.profile, coefficients_closed_form(mp));
      g.expect_true(b.second_summand <= b.second_summand_bound * (1.0 + 1e-12));
      g.expect_true(b.second_summand > 0.0);
    }
  }
}

struct CheckSpec {
  const char* id;
  const char* desc;
  const char* anchor;
  double primary_tol;
  void (*fn)(Gauge&);
};

const CheckSpec kChecks[] = {
    {"upsilon-ode-residual",
     "Y satisfies the hypergeometric ODE on (0,1); Y(0), Y'(0) and the x=1 "
     "combination are exact",
     "x(1-x)Y'' + [c-(a+b+1)x]Y' - a b Y = 0;  Y(1) + 2 (p-1)/(5-p) Y'(1) = 0",
     1e-8, check_upsilon},
    {"gamma-ratio-asymptotics",
     "Gamma-ratio constants approach their p->1 rates monotonically",
     "K_p/(p-1) -> 1;  G_lambda / [(3 sqrt(pi)/4)(p-1)^{3/2}] -> 1", 0.2,
     check_gamma_ratios},
    {"structural-route-agreement",
     "closed-form and ODE structural coefficients agree on t in [-10,10]; "
     "lambda=0 exact formulas reproduced",
     "mu' and lambda' system vs e^lambda = alpha Psi, mu = alpha Phi / Psi",
     1e-6, check_route_agreement},
    {"de-sitter-zero-mass",
     "the reference hemisphere has m(t) = 0 and vanishing polarized total",
     "m(t) == 0 on the round hemisphere; bulk = -(R/4) K_p", 1e-6,
     check_de_sitter_zero_mass},
    {"sds-one-harmonic-mass",
     "1-harmonic mass of the capped Schwarzschild-de Sitter manifold returns "
     "the mass parameter; horizon radii are machine-exact roots",
     "(R+/2)(1 - (Lambda/3) R+^2) = m", 1e-9, check_sds_one_harmonic},
    {"small-sphere-limit",
     "m(t)/|Omega_t| approaches (R(0) - 2 Lambda)/16 pi on small spheres",
     "m(t)/|Omega_t| -> (R(0)-2Lambda)/(16 pi)", 1e-2, check_small_sphere},
    {"monotonicity-derivative-identity",
     "m(t) is nondecreasing on the DEC bundle and the derivative identity "
     "holds unconditionally",
     "dm/dt = e^lambda [ (R-2L)/2 + (5-p)/(p-1) (H/2 - alpha |grad w|)^2 ] "
     "d sigma",
     1e-6, check_monotonicity_identity},
    {"asymptotic-constants",
     "e^{t/(p-1)} e^lambda and e^{t/(p-1)} mu reach their Gamma-ratio limits",
     "R^{2/(p-1)}/(8 pi (p-1)) G(1/2)G(c)/(G(a+1)G(b+1)) and "
     "R^{(3-p)/(p-1)}/(2(p-1)) G(a+1)G(b+1)/(G(a+3/2)G(b+3/2))",
     1e-3, check_asymptotic_constants},
    {"p-to-one-trends",
     "e^{lambda_p} and mu_p e^{lambda_p} drift toward the p->1 limits "
     "monotonically in p",
     "e^{lambda} -> e^{t/2}/16pi (t < T_Lambda), -> 0 (t > T_Lambda)", 1.0,
     check_p_to_one_trends},
    {"hawking-anchors",
     "Hawking mass anchors: Clifford torus value, centered spheres and the "
     "equator of the hemisphere",
     "sqrt(|S|/16pi) { 1 - Lambda |S|/12pi - int H^2 / 16pi }", 1e-12,
     check_hawking_anchors},
    {"flux-identity",
     "level-set flux is constant across every profile, exponent and level",
     "e^{-t} int |grad w|^{p-1} d sigma = 4 pi (p-1)^{p-1}", 1e-10,
     check_flux_identity},
    {"polarized-finiteness-bound",
     "the Lambda-weighted bulk summand respects its Hoelder bound",
     "Lambda int e^lambda Per d tau <= Lambda [4pi (p-1)^{p-1} |M|^{p-1} int "
     "e^{p lambda + tau}]^{1/p}",
     1.0, check_finiteness_bound},
};

unsigned thread_budget(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CURVMASS_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n > 0) return static_cast<unsigned>(n);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

}  // namespace

std::vector<std::string> check_ids() {
  std::vector<std::string> ids;
  for (const auto& c : kChecks) ids.emplace_back(c.id);
  return ids;
}

VerificationReport run_suite(const std::vector<std::string>& selection,
                             const std::map<std::string, double>& tol_overrides,
                             unsigned threads) {
  std::vector<const CheckSpec*> selected;
  auto find_spec = [](const std::string& id) -> const CheckSpec* {
    for (const auto& c : kChecks)
      if (id == c.id) return &c;
    return nullptr;
  };
  if (selection.empty()) {
    for (const auto& c : kChecks) selected.push_back(&c);
  } else {
    for (const auto& id : selection) {
      const CheckSpec* spec = find_spec(id);
      if (!spec) {
        std::ostringstream os;
        os << "unknown check id '" << id << "'; available:";
        for (const auto& c : kChecks) os << ' ' << c.id;
        throw std::invalid_argument(os.str());
      }
      selected.push_back(spec);
    }
  }
  for (const auto& [id, tol] : tol_overrides) {
    if (!find_spec(id)) {
      std::ostringstream os;
      os << "tolerance override for unknown check id '" << id << "'; available:";
      for (const auto& c : kChecks) os << ' ' << c.id;
      throw std::invalid_argument(os.str());
    }
    if (!(tol > 0)) throw std::invalid_argument("tolerance override must be positive");
  }

  // fixed id order in the report, regardless of completion order
  std::sort(selected.begin(), selected.end(),
            [](const CheckSpec* a, const CheckSpec* b) { return a < b; });
  selected.erase(std::unique(selected.begin(), selected.end()), selected.end());

  auto run_one = [&](const CheckSpec* spec) {
    CheckResult res;
    res.id = spec->id;
    res.desc = spec->desc;
    res.anchor = spec->anchor;
    double scale = 1.0;
    if (auto it = tol_overrides.find(spec->id); it != tol_overrides.end())
      scale = it->second / spec->primary_tol;
    Gauge gauge(spec->primary_tol, scale);
    const auto start = std::chrono::steady_clock::now();
    try {
      spec->fn(gauge);
      res.value = gauge.value();
      res.tol = gauge.tol();
      res.pass = gauge.pass();
    } catch (const std::exception& e) {
      res.value = std::numeric_limits<double>::infinity();
      res.tol = spec->primary_tol * scale;
      res.pass = false;
      res.desc = res.desc + " [exception: " + e.what() + "]";
    }
    res.ms = std::chrono::duration<double, std::milli>(
                 std::chrono::steady_clock::now() - start)
                 .count();
    return res;
  };

  const unsigned nthreads =
      std::min<unsigned>(thread_budget(threads),
                         static_cast<unsigned>(selected.size()));
  VerificationReport report;
  report.checks.resize(selected.size());
  if (nthreads <= 1) {
    for (std::size_t i = 0; i < selected.size(); ++i)
      report.checks[i] = run_one(selected[i]);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < nthreads; ++k) {
      pool.emplace_back([&]() {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= selected.size()) return;
          report.checks[i] = run_one(selected[i]);
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  for (const auto& c : report.checks) (c.pass ? report.n_pass : report.n_fail)++;
  return report;
}

std::string report_to_json(const VerificationReport& report) {
  nlohmann::ordered_json j;
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : report.checks) {
    nlohmann::ordered_json jc;
    jc["id"] = c.id;
    jc["desc"] = c.desc;
    jc["anchor"] = c.anchor;
    jc["value"] = c.value;
    jc["target"] = c.target;
    jc["tol"] = c.tol;
    jc["pass"] = c.pass;
    jc["ms"] = c.ms;
    j["checks"].push_back(jc);
  }
  j["summary"]["pass"] = report.n_pass;
  j["summary"]["fail"] = report.n_fail;
  return j.dump(2) + "\n";
}

}  // namespace curvmass::verify
