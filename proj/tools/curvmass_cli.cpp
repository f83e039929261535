// curvmass: structural coefficients, level-set masses, polarized and
// 1-harmonic masses of rotationally symmetric 3-metrics, with CSV/JSON/SVG
// emission and a machine-readable verification suite.
//
// Exit codes: 0 success; 2 configuration errors; 3 computation errors.

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "curvmass/mass.hpp"
#include "curvmass/report.hpp"
#include "curvmass/structural.hpp"
#include "curvmass/svg.hpp"
#include "curvmass/verify.hpp"

namespace {

using namespace curvmass;

std::vector<double> parse_list(const std::string& text, const std::string& what,
                               std::vector<std::string>& errors) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      errors.push_back(what + ": cannot parse '" + item + "' as a number");
    }
  }
  if (out.empty()) errors.push_back(what + ": empty list");
  return out;
}

// plain key=value configuration files; '#' starts a comment; flags win
std::map<std::string, std::string> load_config(const std::string& path,
                                               std::vector<std::string>& errors) {
  std::map<std::string, std::string> kv;
  std::ifstream in(path);
  if (!in) {
    errors.push_back("config: cannot open '" + path + "'");
    return kv;
  }
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto strip = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    if (strip(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back("config line " + std::to_string(lineno) +
                       ": expected key=value, got '" + strip(line) + "'");
      continue;
    }
    const std::string key = strip(line.substr(0, eq));
    const std::string val = strip(line.substr(eq + 1));
    if (key.empty())
      errors.push_back("config line " + std::to_string(lineno) + ": empty key");
    else
      kv[key] = val;
  }
  return kv;
}

struct ProfileOpts {
  std::string kind = "de-sitter";
  double lambda = 3.0;
  double a = 0.0;
  double r_cap = 0.0;
  double m = 0.0;
  double eps = 0.0;
  double sigma = 0.0;
  std::string csv;

  void add_flags(CLI::App* cmd) {
    cmd->add_option("--profile", kind,
                    "profile kind: de-sitter | sds | constant-curvature | "
                    "perturbed | tabulated");
    cmd->add_option("--lambda", lambda, "cosmological constant");
    cmd->add_option("--a", a, "constant-curvature coefficient (phi = 1 - a r^2)");
    cmd->add_option("--r-cap", r_cap, "wall radius for constant-curvature");
    cmd->add_option("--m", m, "Schwarzschild-de Sitter mass parameter");
    cmd->add_option("--eps", eps, "perturbation amplitude");
    cmd->add_option("--sigma", sigma, "perturbation bump scale");
    cmd->add_option("--profile-csv", csv, "CSV path (header r,phi) for tabulated");
  }

  RadialProfile build(std::vector<std::string>& errors) const {
    try {
      if (kind == "de-sitter") return RadialProfile::de_sitter(lambda);
      if (kind == "sds")
        return RadialProfile::schwarzschild_de_sitter_capped(lambda, m);
      if (kind == "constant-curvature")
        return RadialProfile::constant_curvature(a, r_cap);
      if (kind == "perturbed") return RadialProfile::perturbed(lambda, eps, sigma);
      if (kind == "tabulated") return RadialProfile::from_csv(csv);
      errors.push_back("profile: unknown kind '" + kind + "'");
    } catch (const std::exception& e) {
      errors.push_back(std::string("profile: ") + e.what());
    }
    return RadialProfile::de_sitter(1.0);  // placeholder, errors already queued
  }
};

std::vector<double> make_grid(double t_min, double t_max, int samples) {
  std::vector<double> grid(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i)
    grid[static_cast<std::size_t>(i)] =
        t_min + (t_max - t_min) * static_cast<double>(i) /
                    static_cast<double>(samples - 1);
  return grid;
}

void emit(const std::string& out, const std::string& content) {
  if (out.empty() || out == "-")
    std::cout << content;
  else
    write_file(out, content);
}

unsigned thread_cap() {
  if (const char* env = std::getenv("CURVMASS_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n > 0) return static_cast<unsigned>(n);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

std::string trim_num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
};

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open CSV: " + path);
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::stringstream hs(line);
  std::string cell;
  while (std::getline(hs, cell, ',')) t.header.push_back(cell);
  t.columns.resize(t.header.size());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::size_t c = 0;
    while (std::getline(ls, cell, ',') && c < t.columns.size())
      t.columns[c++].push_back(std::stod(cell));
  }
  return t;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"p-harmonic mass-type invariants on rotationally symmetric 3-manifolds"};
  app.require_subcommand(1);

  std::vector<std::string> errors;

  // ---- coeffs ----
  auto* coeffs = app.add_subcommand("coeffs", "structural coefficient tables (CSV)");
  struct {
    double lambda = 3.0;
    std::string p = "2.0";
    double t_min = -10, t_max = 10;
    int samples = 81;
    std::string route = "closed";
    std::string out;
    std::string config;
  } co;
  coeffs->add_option("--config", co.config, "key=value config file (flags win)");
  coeffs->add_option("--lambda", co.lambda);
  coeffs->add_option("--p", co.p, "exponent in (1,3)");
  coeffs->add_option("--t-min", co.t_min);
  coeffs->add_option("--t-max", co.t_max);
  coeffs->add_option("--samples", co.samples);
  coeffs->add_option("--route", co.route, "closed | ode");
  coeffs->add_option("-o,--out", co.out, "output path (default stdout)");

  // ---- mass ----
  auto* mass_cmd = app.add_subcommand("mass", "level-set mass profile (CSV)");
  ProfileOpts mass_prof;
  struct {
    std::string p = "2.0";
    double t_min = -12, t_max = 12;
    int samples = 97;
    std::string out;
    std::string config;
  } ma;
  mass_cmd->add_option("--config", ma.config, "key=value config file (flags win)");
  mass_prof.add_flags(mass_cmd);
  mass_cmd->add_option("--p", ma.p);
  mass_cmd->add_option("--t-min", ma.t_min);
  mass_cmd->add_option("--t-max", ma.t_max);
  mass_cmd->add_option("--samples", ma.samples);
  mass_cmd->add_option("-o,--out", ma.out);

  // ---- polarized ----
  auto* pol = app.add_subcommand("polarized", "polarized mass breakdown (JSON)");
  ProfileOpts pol_prof;
  struct {
    std::string p = "2.0";
    std::string out;
    std::string config;
  } po;
  pol->add_option("--config", po.config, "key=value config file (flags win)");
  pol_prof.add_flags(pol);
  pol->add_option("--p", po.p);
  pol->add_option("-o,--out", po.out);

  // ---- one-harmonic ----
  auto* oneh = app.add_subcommand("one-harmonic",
                                  "1-harmonic mass (scalar + derivation JSON)");
  struct {
    std::string profile = "de-sitter";
    double lambda = 3.0;
    double m = 0.0;
    double t_star = std::numeric_limits<double>::quiet_NaN();
    std::string out;
    std::string config;
  } oh;
  oneh->add_option("--config", oh.config, "key=value config file (flags win)");
  oneh->add_option("--profile", oh.profile, "de-sitter | sds");
  oneh->add_option("--lambda", oh.lambda);
  oneh->add_option("--m", oh.m);
  oneh->add_option("--t-star", oh.t_star, "explicit stop time (overrides profile)");
  oneh->add_option("-o,--out", oh.out);

  // ---- sweep ----
  auto* sweep = app.add_subcommand("sweep", "cartesian mass sweep over p and/or lambda");
  ProfileOpts sweep_prof;
  struct {
    std::string p = "1.5,2.0";
    std::string lambdas;
    double t_min = -12, t_max = 12;
    int samples = 97;
    std::string out_dir = ".";
    std::string config;
  } sw;
  sweep->add_option("--config", sw.config, "key=value config file (flags win)");
  sweep_prof.add_flags(sweep);
  sweep->add_option("--p", sw.p, "comma list of exponents");
  sweep->add_option("--lambdas", sw.lambdas,
                    "comma list of reference constants (default: --lambda)");
  sweep->add_option("--t-min", sw.t_min);
  sweep->add_option("--t-max", sw.t_max);
  sweep->add_option("--samples", sw.samples);
  sweep->add_option("--out-dir", sw.out_dir);

  // ---- verify ----
  auto* ver = app.add_subcommand("verify", "run the verification suite");
  struct {
    bool all = false;
    std::string checks;
    std::vector<std::string> tols;
    std::string report;
    unsigned threads = 0;
  } ve;
  ver->add_flag("--all", ve.all, "run every check (default when --checks absent)");
  ver->add_option("--checks", ve.checks, "comma list of check ids");
  ver->add_option("--tol", ve.tols, "tolerance override id=value (repeatable)");
  ver->add_option("--report", ve.report, "write the JSON report here");
  ver->add_option("--threads", ve.threads, "cap worker threads (0 = auto)");

  // ---- plot ----
  auto* plot = app.add_subcommand("plot", "SVG line charts");
  struct {
    std::string kind = "mass";
    std::string input;
    double lambda = 0.3;
    double t = 1.0;
    std::string p = "1.3,1.2,1.1,1.05";
    std::string out = "chart.svg";
  } pl;
  plot->add_option("--kind", pl.kind, "mass | coeffs | p-trends");
  plot->add_option("--input", pl.input, "CSV produced by the mass/coeffs commands");
  plot->add_option("--lambda", pl.lambda, "p-trends: reference constant");
  plot->add_option("--t", pl.t, "p-trends: level");
  plot->add_option("--p", pl.p, "p-trends: comma list of exponents");
  plot->add_option("-o,--out", pl.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      app.exit(e);
      return 0;
    }
    std::cerr << e.what() << "\n";
    return 2;
  }

  // merge config files (flags win: only absent flags are filled in)
  auto merge_config = [&](CLI::App* cmd, const std::string& path) {
    if (path.empty()) return;
    const auto kv = load_config(path, errors);
    for (const auto& [key, val] : kv) {
      CLI::Option* opt = cmd->get_option_no_throw("--" + key);
      if (!opt) {
        errors.push_back("config: unknown key '" + key + "'");
        continue;
      }
      if (opt->count() > 0) continue;  // flag given explicitly, it wins
      try {
        opt->add_result(val);
        opt->run_callback();
      } catch (const std::exception& e) {
        errors.push_back("config: bad value for '" + key + "': " + e.what());
      }
    }
  };

  try {
    if (coeffs->parsed()) {
      merge_config(coeffs, co.config);
      const auto ps = parse_list(co.p, "--p", errors);
      if (co.samples < 2) errors.push_back("--samples: need >= 2");
      if (!(co.t_min < co.t_max)) errors.push_back("--t-min must be < --t-max");
      if (co.route != "closed" && co.route != "ode")
        errors.push_back("--route: expected 'closed' or 'ode'");
      for (double p : ps)
        if (!(p > 1.0 && p < 3.0))
          errors.push_back("--p: " + trim_num(p) + " outside (1,3)");
      if (!errors.empty()) throw CLI::ValidationError("config", "");
      std::ostringstream all;
      for (double p : ps) {
        const ModelParams mp = make_model_params(co.lambda, p);
        const StructuralCoefficients c =
            co.route == "ode" ? coefficients_ode(mp, -20.0, co.t_max + 2.0)
                              : coefficients_closed_form(mp);
        std::vector<CoeffRow> rows;
        for (double t : make_grid(co.t_min, co.t_max, co.samples))
          rows.push_back({t, c.alpha(t), c.mu(t), c.lambda(t), c.exp_lambda(t)});
        all << coeffs_csv(rows);
      }
      emit(co.out, all.str());
      return 0;
    }

    if (mass_cmd->parsed()) {
      merge_config(mass_cmd, ma.config);
      const auto ps = parse_list(ma.p, "--p", errors);
      if (ma.samples < 2) errors.push_back("--samples: need >= 2");
      if (!(ma.t_min < ma.t_max)) errors.push_back("--t-min must be < --t-max");
      for (double p : ps)
        if (!(p > 1.0 && p < 3.0))
          errors.push_back("--p: " + trim_num(p) + " outside (1,3)");
      const RadialProfile prof = mass_prof.build(errors);
      if (!errors.empty()) throw CLI::ValidationError("config", "");
      std::ostringstream all;
      for (double p : ps) {
        const ModelParams mp = make_model_params(mass_prof.lambda, p);
        const auto result = mass_profile(prof, coefficients_closed_form(mp), mp,
                                         make_grid(ma.t_min, ma.t_max, ma.samples));
        all << mass_csv(result);
      }
      emit(ma.out, all.str());
      return 0;
    }

    if (pol->parsed()) {
      merge_config(pol, po.config);
      const auto ps = parse_list(po.p, "--p", errors);
      const RadialProfile prof = pol_prof.build(errors);
      if (!(pol_prof.lambda > 0)) errors.push_back("polarized: requires --lambda > 0");
      if (!errors.empty()) throw CLI::ValidationError("config", "");
      std::ostringstream all;
      for (double p : ps) {
        const ModelParams mp = make_model_params(pol_prof.lambda, p);
        const auto b = polarized_mass(prof, coefficients_closed_form(mp));
        all << polarized_json(b, mp, prof.describe());
      }
      emit(po.out, all.str());
      return 0;
    }

    if (oneh->parsed()) {
      merge_config(oneh, oh.config);
      if (!(oh.lambda > 0)) errors.push_back("one-harmonic: requires --lambda > 0");
      double t_star = oh.t_star;
      if (std::isnan(t_star)) {
        if (oh.profile == "sds") {
          try {
            t_star = sds_t_star(oh.lambda, oh.m);
          } catch (const std::exception& e) {
            errors.push_back(std::string("one-harmonic: ") + e.what());
          }
        } else if (oh.profile == "de-sitter") {
          t_star = std::log(3.0 / oh.lambda);
        } else {
          errors.push_back("one-harmonic: profile must be de-sitter or sds "
                           "(or pass --t-star)");
        }
      }
      if (!errors.empty()) throw CLI::ValidationError("config", "");
      const double value = one_harmonic_mass(oh.lambda, t_star);
      emit(oh.out, one_harmonic_json(oh.lambda, t_star, value));
      return 0;
    }

    if (sweep->parsed()) {
      merge_config(sweep, sw.config);
      const auto ps = parse_list(sw.p, "--p", errors);
      std::vector<double> lambdas = sw.lambdas.empty()
                                        ? std::vector<double>{sweep_prof.lambda}
                                        : parse_list(sw.lambdas, "--lambdas", errors);
      if (sw.samples < 2) errors.push_back("--samples: need >= 2");
      if (!(sw.t_min < sw.t_max)) errors.push_back("--t-min must be < --t-max");
      if (!errors.empty()) throw CLI::ValidationError("config", "");
      std::filesystem::create_directories(sw.out_dir);
      struct Job {
        double lambda, p;
      };
      std::vector<Job> jobs;
      for (double lambda : lambdas)
        for (double p : ps) jobs.push_back({lambda, p});
      std::atomic<std::size_t> next{0};
      std::atomic<bool> failed{false};
      std::string first_error;
      std::mutex err_mutex;
      auto worker = [&]() {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= jobs.size() || failed.load()) return;
          try {
            ProfileOpts opts = sweep_prof;
            opts.lambda = jobs[i].lambda;
            std::vector<std::string> local_errors;
            const RadialProfile prof = opts.build(local_errors);
            if (!local_errors.empty())
              throw std::runtime_error(local_errors.front());
            const ModelParams mp = make_model_params(jobs[i].lambda, jobs[i].p);
            const auto result =
                mass_profile(prof, coefficients_closed_form(mp), mp,
                             make_grid(sw.t_min, sw.t_max, sw.samples));
            std::ostringstream name;
            name << sw.out_dir << "/mass_lambda" << jobs[i].lambda << "_p"
                 << jobs[i].p << ".csv";
            write_file(name.str(), mass_csv(result));
          } catch (const std::exception& e) {
            std::lock_guard<std::mutex> lock(err_mutex);
            if (!failed.exchange(true)) first_error = e.what();
          }
        }
      };
      const unsigned n = std::min<unsigned>(thread_cap(),
                                            static_cast<unsigned>(jobs.size()));
      std::vector<std::thread> pool;
      for (unsigned k = 0; k < n; ++k) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
      if (failed.load()) throw std::runtime_error(first_error);
      return 0;
    }

    if (ver->parsed()) {
      std::vector<std::string> ids;
      if (!ve.checks.empty()) {
        std::stringstream ss(ve.checks);
        std::string id;
        while (std::getline(ss, id, ',')) ids.push_back(id);
      }
      std::map<std::string, double> overrides;
      for (const auto& spec : ve.tols) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos) {
          errors.push_back("--tol: expected id=value, got '" + spec + "'");
          continue;
        }
        overrides[spec.substr(0, eq)] = std::stod(spec.substr(eq + 1));
      }
      if (!errors.empty()) throw CLI::ValidationError("config", "");
      const auto report = verify::run_suite(ids, overrides, ve.threads);
      for (const auto& c : report.checks)
        std::cout << (c.pass ? "PASS" : "FAIL") << "  " << c.id
                  << "  (value " << format_sci(c.value) << ", tol "
                  << format_sci(c.tol) << ", " << c.ms << " ms)\n";
      std::cout << "summary: " << report.n_pass << " passed, " << report.n_fail
                << " failed\n";
      if (!ve.report.empty()) write_file(ve.report, verify::report_to_json(report));
      return report.all_pass() ? 0 : 3;
    }

    if (plot->parsed()) {
      std::string content;
      if (pl.kind == "mass" || pl.kind == "coeffs") {
        if (pl.input.empty()) {
          errors.push_back("plot: --input CSV required for kind " + pl.kind);
          throw CLI::ValidationError("config", "");
        }
        const CsvTable t = read_csv(pl.input);
        svg::LineChart c(pl.kind == "mass" ? "level-set mass m(t)"
                                           : "structural coefficients",
                         "t", pl.kind == "mass" ? "m(t)" : "value");
        const std::vector<std::string> wanted =
            pl.kind == "mass" ? std::vector<std::string>{"mass"}
                              : std::vector<std::string>{"alpha", "mu", "exp_lambda"};
        for (const auto& name : wanted) {
          for (std::size_t i = 0; i < t.header.size(); ++i) {
            if (t.header[i] == name) {
              c.add_series({name, t.columns[0], t.columns[i]});
            }
          }
        }
        content = c.render();
      } else if (pl.kind == "p-trends") {
        const auto ps = parse_list(pl.p, "--p", errors);
        if (!errors.empty()) throw CLI::ValidationError("config", "");
        const auto table = p_limit_profiles(pl.lambda, pl.t, ps);
        svg::LineChart c("p -> 1 trend of the structural coefficients", "p", "value");
        svg::Series s1{"exp_lambda", {}, {}}, s2{"mu exp_lambda", {}, {}},
            s3{"limit exp_lambda", {}, {}}, s4{"limit mu exp_lambda", {}, {}};
        for (const auto& row : table.rows) {
          s1.x.push_back(row.p);
          s1.y.push_back(row.exp_lambda);
          s2.x.push_back(row.p);
          s2.y.push_back(row.mu_exp_lambda);
          s3.x.push_back(row.p);
          s3.y.push_back(table.target_exp_lambda);
          s4.x.push_back(row.p);
          s4.y.push_back(table.target_mu_exp_lambda);
        }
        c.add_series(s1);
        c.add_series(s2);
        c.add_series(s3);
        c.add_series(s4);
        content = c.render();
      } else {
        errors.push_back("plot: unknown kind '" + pl.kind + "'");
        throw CLI::ValidationError("config", "");
      }
      emit(pl.out, content);
      return 0;
    }
  } catch (const CLI::ValidationError&) {
    for (const auto& e : errors) std::cerr << "error: " << e << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "computation error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return run_cli(argc, argv); }
