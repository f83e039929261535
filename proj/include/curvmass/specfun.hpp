#pragma once

// Log-Gamma, Gamma ratios, the Gauss hypergeometric series 2F1 restricted to
// x in [0, 1), and the function Y(x) = 2F1(a_p, b_p, c_p; x) together with
// its derivative and the boundary combination Y + 2[(p-1)/(5-p)] x Y'.
//
// All Gamma ratios are computed in the log domain with explicit sign
// bookkeeping: c_p = p/(p-1) explodes as p -> 1 and direct Gamma overflows.

#include <stdexcept>
#include <string>

namespace curvmass::specfun {

class pole_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class series_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// log Gamma(x) for x > 0.  Relative error of exp(result) below ~1e-13 on
// (0, 170].
double log_gamma(double x);

struct SignedLogGamma {
  double log_abs;
  int sign;  // +1 or -1
};

// log |Gamma(x)| and sign for any non-pole x (negative non-integers served
// through the reflection formula).
SignedLogGamma log_gamma_signed(double x);

// Hypergeometric parameters tied to the exponent p.  For 1 < p < 3:
//   a_p > 1/2,  -1 < b_p < -1/2,  c_p > 3/2,
//   a_p + b_p = (3-p)/(2(p-1)),   a_p b_p = -(5-p)/(4(p-1)),
//   c_p = a_p + b_p + 3/2.
struct HyperParams {
  double a;
  double b;
  double c;
  double p;
};

HyperParams hyper_params(double p);  // 1 < p <= 3

// 2F1(a, b, c; x) for 0 <= x < 1.  Below the switch threshold x* = 0.75 the
// raw power series is summed; above it the x -> 1-x connection formula is
// used (requires c-a-b non-integer, which holds for every parameter set
// produced by hyper_params).
double hyp2f1(double a, double b, double c, double x);

// 2F1(a, b, c; 1) = Gamma(c)Gamma(c-a-b) / (Gamma(c-a)Gamma(c-b)),
// requires c - a - b > 0.
double gauss_at_one(double a, double b, double c);

struct UpsilonValue {
  double y;   // Y(x)
  double dy;  // Y'(x)
};

// Y(x) and Y'(x) = -[(5-p)/(4p)] 2F1(a_p+1, b_p+1, c_p+1; x) for
// 0 <= x <= 1 (x = 1 served by Gauss values).
UpsilonValue upsilon_pair(double p, double x);

// Y''(x) from the shifted series; used by the hypergeometric ODE residual.
double upsilon_second(double p, double x);

// [Y(x) + 2((p-1)/(5-p)) x Y'(x)] / sqrt(1-x).  The numerator has a simple
// sqrt(1-x) zero at x = 1; this form is assembled from the connection-formula
// series so that no cancellation occurs as x -> 1.  Strictly positive on
// [0, 1]; value 1 at x = 0.
double upsilon_boundary_combo(double p, double x);

// Variants taking (x, y) with y = 1 - x supplied by the caller, for use near
// x = 1 where y is known exactly (from the boundary gap) while 1 - x is not.
double upsilon_value_xy(double p, double x, double y);
double upsilon_boundary_combo_xy(double p, double x, double y);

// Series extension of (Y, Y') to -1 < x < 0 (alternating series); used by the
// negative-curvature branch of the structural coefficients.
UpsilonValue upsilon_pair_ext(double p, double x);

// Gamma-ratio constants of the large-level asymptotics.
double k_p(double p);              // Gamma(1/2)Gamma(c)/(Gamma(a+3/2)Gamma(b+3/2)), ~ (p-1)
double gamma_ratio_lambda(double p);  // Gamma(1/2)Gamma(c)/(Gamma(a+1)Gamma(b+1)), ~ (3 sqrt(pi)/4)(p-1)^(3/2)
double gamma_ratio_mu(double p);      // Gamma(a+1)Gamma(b+1)/(Gamma(a+3/2)Gamma(b+3/2))

}  // namespace curvmass::specfun
