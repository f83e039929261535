#pragma once

// Mass functionals on rotationally symmetric profiles with the pole at the
// center: the Hawking mass, the level-set quantity
//   m(t) = int_{-inf}^t e^{lambda(tau)} (4 pi - Lambda |Sigma_tau|) d tau
//          - e^{lambda(t)} int_{Sigma_t} |grad w| (H - mu(t) |grad w|) d sigma,
// its derivative identity, the polarized mass obtained as t -> +infinity,
// and the 1-harmonic mass of the area-growth flow.

#include <span>
#include <string>
#include <vector>

#include "curvmass/geometry.hpp"
#include "curvmass/pgreen.hpp"
#include "curvmass/structural.hpp"

namespace curvmass {

// sqrt(|Sigma|/16pi) { 1 - Lambda |Sigma| / 12 pi - (1/16pi) int H^2 }
double hawking_mass(double area, double willmore, double lambda);

// Hawking mass of the centered sphere of coordinate radius r.
double hawking_mass_sphere(const RadialProfile& profile, double r, double lambda);

// d/dt of the Hawking mass along the exponential-area sphere flow
// r = e^{t/2}: equals r^3 (R(r) - 2 Lambda) / 8 radially.
double hawking_geroch_rhs(const RadialProfile& profile, double r, double lambda);

struct MassRow {
  double t = 0;
  double r = 0;
  double area = 0;    // 4 pi r^2 exactly
  double H = 0;
  double grad_w = 0;
  double mass = 0;
  double dmdt_num = 0;
  double dmdt_formula = 0;
};

struct MassProfileResult {
  ModelParams params;
  std::string profile_desc;
  std::vector<MassRow> rows;
};

struct PolarizedMassBreakdown {
  double bulk = 0;
  double boundary_h_term = 0;
  double boundary_grad_term = 0;
  double total = 0;  // bulk - boundary_h_term + boundary_grad_term
  double k_p = 0;
  // truncation metadata
  double t_min = 0;
  double t_max = 0;
  double lower_tail = 0;
  double upper_tail = 0;
  // finiteness data: the Lambda-weighted bulk summand and its Hoelder bound
  double second_summand = 0;
  double second_summand_bound = 0;
  double volume = 0;
};

// Bundles profile, structural coefficients and the p-Green evaluator of one
// (profile, Lambda, p) configuration.  Rows of a profile sweep are
// independent; the object is immutable after construction.
class MassEvaluator {
 public:
  MassEvaluator(RadialProfile profile, StructuralCoefficients coeffs);

  const RadialGreen& green() const { return green_; }
  const StructuralCoefficients& coeffs() const { return coeffs_; }
  const ModelParams& params() const { return coeffs_.params(); }

  // e^{lambda(tau)} (4 pi - Lambda 4 pi r(tau)^2)
  double bulk_integrand(double tau) const;
  // analytic value of the bulk integral below t_min (exponential regime)
  double lower_tail(double t_min) const;
  double boundary_term(const RadialGreen::Level& lv) const;
  double mass_at(double t) const;
  // e^{lambda} [ (R - 2 Lambda)/2 + (5-p)/(p-1) (H/2 - alpha |grad w|)^2 ] 4 pi r^2
  double derivative_rhs(double t) const;

  MassProfileResult profile_rows(std::span<const double> t_grid) const;
  PolarizedMassBreakdown polarized() const;

 private:
  RadialProfile profile_;
  StructuralCoefficients coeffs_;
  RadialGreen green_;
};

// mass_profile with the (Lambda, p) contract check between the coefficients
// and the requested parameters.
MassProfileResult mass_profile(const RadialProfile& profile,
                               const StructuralCoefficients& coeffs,
                               const ModelParams& params,
                               std::span<const double> t_grid);

PolarizedMassBreakdown polarized_mass(const RadialProfile& profile,
                                      const StructuralCoefficients& coeffs);

// (e^{T/2}/2)(1 - e^{T - T_Lambda}) with T = min(T_Lambda, t_star); the
// closed form is cross-checked against the quadrature of the defining
// integral to 1e-10 before being returned.
double one_harmonic_mass(double lambda, double t_star);

// t_star of the capped Schwarzschild-de Sitter manifold: 2 log R+(lambda, m).
double sds_t_star(double lambda, double m);

struct FormalLimitRow {
  double p = 0;
  double m_p = 0;      // m^{(p)}(t)
  double m_hawking = 0;  // Hawking mass of the sphere r = e^{t/2}
  double gap = 0;
};

struct FormalLimitTable {
  double lambda = 0;
  double t = 0;
  bool experimental = true;
  std::string caveat;
  std::vector<FormalLimitRow> rows;
};

// Diagnostic comparison of m^{(p)}(t) against the Hawking mass of the
// exponential-area sphere as p decreases toward 1.  Trend-only: the two
// columns label level sets differently (by level value vs by area radius).
FormalLimitTable formal_limit_experiment(const RadialProfile& profile,
                                         double lambda, double t,
                                         const std::vector<double>& p_list);

}  // namespace curvmass
