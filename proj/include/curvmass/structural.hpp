#pragma once

// The structural coefficients alpha(t), mu(t), lambda(t) of the semi-decoupled
// ODE system
//   mu'     = [(5-p)/(p-1)] alpha^2 - [ (5-p)/(p-1) alpha + 1/(p-1) ] mu
//             + [(3-p)/(p-1)] mu^2
//   lambda' = [(5-p)/(p-1)] alpha - 1/(p-1) - [(3-p)/(p-1)] mu
// selected by the ancient-solution conditions mu -> 1/(3-p) and
// lambda - t/(3-p) -> kappa as t -> -infinity.
//
// For Lambda > 0 the production route is the hypergeometric closed form
//   e^lambda = alpha * Psi(r(t)),   mu = alpha * Phi(r(t)) / Psi(r(t)),
// with (Phi, Psi) built from Y = 2F1(a_p, b_p, c_p; Lambda r^2/3).
// Lambda = 0 has exact formulas, and the ODE route (used as an independent
// verifier, and as the primary route for Lambda < 0) integrates the system
// from deep negative time.

#include <memory>
#include <vector>

#include "curvmass/geometry.hpp"
#include "curvmass/pgreen.hpp"

namespace curvmass {

enum class CoeffRoute { closed_form, ode, lambda_zero_exact };

class StructuralCoefficients {
 public:
  const ModelParams& params() const;
  CoeffRoute route() const;

  double alpha(double t) const;
  double mu(double t) const;
  double lambda(double t) const;  // log of e^lambda; exponentiated on demand
  double exp_lambda(double t) const;

  double phi_cap(double r) const;  // Phi
  double psi_cap(double r) const;  // Psi

  struct Impl;
  explicit StructuralCoefficients(std::shared_ptr<const Impl> impl);

 private:
  std::shared_ptr<const Impl> impl_;
};

// integration constant of lambda:
//   kappa = [(p-1)/(3-p)] log[(p-1)/(3-p)] - log[8 pi (3-p)]
double lambda_kappa(double p);

// alpha(t) = e^{-t/(p-1)}/(p-1) * sqrt(phi(r(t))) * r(t)^{(3-p)/(p-1)} on the
// reference model of the given Lambda (identically 1/(3-p) when Lambda = 0).
double alpha_model(const ModelParams& params, double t);

// (Phi(r), Psi(r)): closed form for Lambda >= 0; for Lambda < 0 the series in
// Lambda r^2/3 seeds r <= 0.9 sqrt(3/|Lambda|) and the linear ODE system is
// continued outward from there.
std::pair<double, double> phi_psi(const ModelParams& params, double r);

// Production evaluators: closed form for Lambda > 0, exact formulas for
// Lambda = 0.  (Lambda < 0 is served by coefficients_ode.)
StructuralCoefficients coefficients_closed_form(const ModelParams& params);

// ODE route from mu(t_start) = 1/(3-p), lambda(t_start) = t_start/(3-p)+kappa.
// Requires t_start <= -15; for Lambda < 0 the corridor 0 < mu < 1/(3-p) is
// validated at every node.
StructuralCoefficients coefficients_ode(const ModelParams& params,
                                        double t_start = -20.0,
                                        double t_end = 20.0);

// Zeros mu_- <= mu_+ of the Riccati right-hand side at frozen alpha.
std::pair<double, double> riccati_equilibria(double p, double alpha);

// Rows of the p -> 1 diagnostic sweep at a fixed level t.
struct PLimitRow {
  double p;
  double r;              // r_p(t)
  double exp_lambda;     // e^{lambda_p(t)}
  double mu_exp_lambda;  // mu_p(t) e^{lambda_p(t)}
};

struct PLimitTable {
  double lambda = 0;
  double t = 0;
  double target_r = 0;            // min(e^{t/2}, R_Lambda)
  double target_exp_lambda = 0;   // e^{t/2}/16pi below T_Lambda, else 0
  double target_mu_exp_lambda = 0;  // e^{t/2}/32pi below T_Lambda, else 0
  std::vector<PLimitRow> rows;
};

PLimitTable p_limit_profiles(double lambda, double t,
                             const std::vector<double>& p_list);

}  // namespace curvmass
