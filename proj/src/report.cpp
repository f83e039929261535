#include "curvmass/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace curvmass {

std::string format_sci(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17e", x);
  return buf;
}

std::string coeffs_csv(const std::vector<CoeffRow>& rows) {
  std::ostringstream os;
  os << "t,alpha,mu,lambda,exp_lambda\n";
  for (const auto& r : rows) {
    os << format_sci(r.t) << ',' << format_sci(r.alpha) << ',' << format_sci(r.mu)
       << ',' << format_sci(r.lambda) << ',' << format_sci(r.exp_lambda) << '\n';
  }
  return os.str();
}

std::string mass_csv(const MassProfileResult& result) {
  std::ostringstream os;
  os << "t,r,area,H,grad_w,mass,dmdt_num,dmdt_formula\n";
  for (const auto& r : result.rows) {
    os << format_sci(r.t) << ',' << format_sci(r.r) << ',' << format_sci(r.area)
       << ',' << format_sci(r.H) << ',' << format_sci(r.grad_w) << ','
       << format_sci(r.mass) << ',' << format_sci(r.dmdt_num) << ','
       << format_sci(r.dmdt_formula) << '\n';
  }
  return os.str();
}

std::string polarized_json(const PolarizedMassBreakdown& b,
                           const ModelParams& params,
                           const std::string& profile_desc) {
  nlohmann::ordered_json j;
  j["profile"] = profile_desc;
  j["lambda"] = params.lambda;
  j["p"] = params.p;
  j["bulk"] = b.bulk;
  j["boundary_H_term"] = b.boundary_h_term;
  j["boundary_grad_term"] = b.boundary_grad_term;
  j["total"] = b.total;
  j["K_p"] = b.k_p;
  j["truncation"]["t_min"] = b.t_min;
  j["truncation"]["t_max"] = b.t_max;
  j["truncation"]["lower_tail"] = b.lower_tail;
  j["truncation"]["upper_tail"] = b.upper_tail;
  j["finiteness"]["second_summand"] = b.second_summand;
  j["finiteness"]["bound"] = b.second_summand_bound;
  j["finiteness"]["volume"] = b.volume;
  return j.dump(2) + "\n";
}

std::string one_harmonic_json(double lambda, double t_star, double value) {
  nlohmann::ordered_json j;
  j["lambda"] = lambda;
  j["t_star"] = t_star;
  j["t_lambda"] = std::log(3.0 / lambda);
  j["value"] = value;
  j["derivation"] =
      "areas 4 pi e^tau; m = (e^{T/2}/2)(1 - e^{T - T_Lambda}) with "
      "T = min(T_Lambda, t_star); cross-checked against the defining integral";
  return j.dump(2) + "\n";
}

std::string p_limit_csv(const PLimitTable& table) {
  std::ostringstream os;
  os << "p,r,exp_lambda,mu_exp_lambda,target_r,target_exp_lambda,"
        "target_mu_exp_lambda\n";
  for (const auto& r : table.rows) {
    os << format_sci(r.p) << ',' << format_sci(r.r) << ','
       << format_sci(r.exp_lambda) << ',' << format_sci(r.mu_exp_lambda) << ','
       << format_sci(table.target_r) << ',' << format_sci(table.target_exp_lambda)
       << ',' << format_sci(table.target_mu_exp_lambda) << '\n';
  }
  return os.str();
}

std::string formal_limit_json(const FormalLimitTable& table) {
  nlohmann::ordered_json j;
  j["lambda"] = table.lambda;
  j["t"] = table.t;
  j["experimental"] = table.experimental;
  j["caveat"] = table.caveat;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : table.rows) {
    nlohmann::ordered_json jr;
    jr["p"] = r.p;
    jr["m_p"] = r.m_p;
    jr["m_hawking"] = r.m_hawking;
    jr["gap"] = r.gap;
    j["rows"].push_back(jr);
  }
  return j.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
  if (!out) throw std::runtime_error("failed writing output file: " + path);
}

}  // namespace curvmass
