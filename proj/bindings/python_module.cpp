#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "curvmass/mass.hpp"
#include "curvmass/report.hpp"
#include "curvmass/specfun.hpp"
#include "curvmass/structural.hpp"
#include "curvmass/verify.hpp"

namespace py = pybind11;
using namespace curvmass;

namespace {

RadialProfile make_profile(const std::string& kind, py::kwargs kw) {
  auto get = [&](const char* key, double fallback) {
    return kw.contains(key) ? kw[key].cast<double>() : fallback;
  };
  if (kind == "de-sitter") return RadialProfile::de_sitter(get("lam", 3.0));
  if (kind == "sds")
    return RadialProfile::schwarzschild_de_sitter_capped(get("lam", 3.0),
                                                         get("m", 0.1));
  if (kind == "constant-curvature")
    return RadialProfile::constant_curvature(get("a", 1.0), get("r_cap", 0.0));
  if (kind == "perturbed")
    return RadialProfile::perturbed(get("lam", 3.0), get("eps", -0.05),
                                    get("sigma", 0.6));
  throw std::invalid_argument("unknown profile kind: " + kind);
}

py::dict breakdown_dict(const PolarizedMassBreakdown& b) {
  py::dict d;
  d["bulk"] = b.bulk;
  d["boundary_H_term"] = b.boundary_h_term;
  d["boundary_grad_term"] = b.boundary_grad_term;
  d["total"] = b.total;
  d["K_p"] = b.k_p;
  d["t_min"] = b.t_min;
  d["t_max"] = b.t_max;
  d["lower_tail"] = b.lower_tail;
  d["upper_tail"] = b.upper_tail;
  d["second_summand"] = b.second_summand;
  d["second_summand_bound"] = b.second_summand_bound;
  d["volume"] = b.volume;
  return d;
}

}  // namespace

PYBIND11_MODULE(_curvmass, m) {
  m.doc() = "p-harmonic mass-type invariants on rotationally symmetric 3-manifolds";

  py::class_<RadialProfile>(m, "RadialProfile")
      .def("phi", &RadialProfile::phi)
      .def("dphi", &RadialProfile::dphi)
      .def("r_max", &RadialProfile::r_max)
      .def("describe", &RadialProfile::describe);
  m.def("profile", &make_profile, py::arg("kind"),
        "build a profile: de-sitter | sds | constant-curvature | perturbed");

  m.def("scalar_curvature", &scalar_curvature);
  m.def("mean_curvature", &mean_curvature);
  m.def("dec_margin", &dec_margin, py::arg("profile"), py::arg("lam"),
        py::arg("samples") = 256);
  m.def("sds_horizon_radii", &sds_horizon_radii);

  m.def("hyper_params", [](double p) {
    const auto h = specfun::hyper_params(p);
    return py::make_tuple(h.a, h.b, h.c);
  });
  m.def("hyp2f1", &specfun::hyp2f1);
  m.def("gauss_at_one", &specfun::gauss_at_one);
  m.def("upsilon", [](double p, double x) {
    const auto uv = specfun::upsilon_pair(p, x);
    return py::make_tuple(uv.y, uv.dy);
  });
  m.def("k_p", &specfun::k_p);
  m.def("log_gamma", &specfun::log_gamma);

  py::class_<StructuralCoefficients>(m, "StructuralCoefficients")
      .def("alpha", &StructuralCoefficients::alpha)
      .def("mu", &StructuralCoefficients::mu)
      .def("lam", &StructuralCoefficients::lambda)
      .def("exp_lambda", &StructuralCoefficients::exp_lambda)
      .def("phi_cap", &StructuralCoefficients::phi_cap)
      .def("psi_cap", &StructuralCoefficients::psi_cap);
  m.def("coefficients_closed_form", [](double lam, double p) {
    return coefficients_closed_form(make_model_params(lam, p));
  });
  m.def(
      "coefficients_ode",
      [](double lam, double p, double t_start, double t_end) {
        return coefficients_ode(make_model_params(lam, p), t_start, t_end);
      },
      py::arg("lam"), py::arg("p"), py::arg("t_start") = -20.0,
      py::arg("t_end") = 20.0);
  m.def("alpha_model", [](double lam, double p, double t) {
    return alpha_model(make_model_params(lam, p), t);
  });
  m.def("riccati_equilibria", &riccati_equilibria);

  m.def("hawking_mass", &hawking_mass);
  m.def("hawking_mass_sphere", &hawking_mass_sphere);
  m.def("one_harmonic_mass", &one_harmonic_mass);
  m.def("sds_t_star", &sds_t_star);

  m.def("mass_profile",
        [](const RadialProfile& prof, double lam, double p,
           std::vector<double> grid) {
          const ModelParams mp = make_model_params(lam, p);
          const auto result =
              mass_profile(prof, coefficients_closed_form(mp), mp, grid);
          py::list rows;
          for (const auto& r : result.rows) {
            py::dict d;
            d["t"] = r.t;
            d["r"] = r.r;
            d["area"] = r.area;
            d["H"] = r.H;
            d["grad_w"] = r.grad_w;
            d["mass"] = r.mass;
            d["dmdt_num"] = r.dmdt_num;
            d["dmdt_formula"] = r.dmdt_formula;
            rows.append(d);
          }
          return rows;
        });
  m.def("polarized_mass", [](const RadialProfile& prof, double lam, double p) {
    const ModelParams mp = make_model_params(lam, p);
    return breakdown_dict(polarized_mass(prof, coefficients_closed_form(mp)));
  });

  m.def("p_limit_profiles",
        [](double lam, double t, std::vector<double> ps) {
          const auto table = p_limit_profiles(lam, t, ps);
          py::dict d;
          d["target_r"] = table.target_r;
          d["target_exp_lambda"] = table.target_exp_lambda;
          d["target_mu_exp_lambda"] = table.target_mu_exp_lambda;
          py::list rows;
          for (const auto& r : table.rows) {
            py::dict row;
            row["p"] = r.p;
            row["r"] = r.r;
            row["exp_lambda"] = r.exp_lambda;
            row["mu_exp_lambda"] = r.mu_exp_lambda;
            rows.append(row);
          }
          d["rows"] = rows;
          return d;
        });

  m.def("formal_limit_experiment",
        [](const RadialProfile& prof, double lam, double t,
           std::vector<double> ps) {
          const auto table = formal_limit_experiment(prof, lam, t, ps);
          py::dict d;
          d["experimental"] = table.experimental;
          d["caveat"] = table.caveat;
          py::list rows;
          for (const auto& r : table.rows) {
            py::dict row;
            row["p"] = r.p;
            row["m_p"] = r.m_p;
            row["m_hawking"] = r.m_hawking;
            row["gap"] = r.gap;
            rows.append(row);
          }
          d["rows"] = rows;
          return d;
        });

  m.def(
      "verify",
      [](std::vector<std::string> checks, unsigned threads) {
        const auto report = verify::run_suite(checks, {}, threads);
        py::list out;
        for (const auto& c : report.checks) {
          py::dict d;
          d["id"] = c.id;
          d["value"] = c.value;
          d["tol"] = c.tol;
          d["pass"] = c.pass;
          out.append(d);
        }
        return out;
      },
      py::arg("checks") = std::vector<std::string>{}, py::arg("threads") = 0);
}
