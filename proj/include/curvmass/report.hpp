#pragma once

// CSV and JSON emission with frozen column names and full double precision.
// Identical inputs produce byte-identical files.

#include <string>
#include <vector>

#include "curvmass/mass.hpp"
#include "curvmass/structural.hpp"

namespace curvmass {

// %.17e rendering used by every numeric output
std::string format_sci(double x);

struct CoeffRow {
  double t, alpha, mu, lambda, exp_lambda;
};

// header: t,alpha,mu,lambda,exp_lambda
std::string coeffs_csv(const std::vector<CoeffRow>& rows);

// header: t,r,area,H,grad_w,mass,dmdt_num,dmdt_formula
std::string mass_csv(const MassProfileResult& result);

std::string polarized_json(const PolarizedMassBreakdown& breakdown,
                           const ModelParams& params,
                           const std::string& profile_desc);

std::string one_harmonic_json(double lambda, double t_star, double value);

std::string p_limit_csv(const PLimitTable& table);

std::string formal_limit_json(const FormalLimitTable& table);

void write_file(const std::string& path, const std::string& content);

}  // namespace curvmass
