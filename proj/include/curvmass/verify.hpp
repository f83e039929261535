#pragma once

// Machine-readable verification suite.  Every acceptance-grade property of
// the library maps to exactly one check id; checks run in dependency order
// (special functions -> structural coefficients -> masses), partial failures
// do not abort the suite, and the report is deterministic apart from
// runtimes.

#include <map>
#include <string>
#include <vector>

namespace curvmass::verify {

struct CheckResult {
  std::string id;
  std::string desc;
  std::string anchor;  // the formula or identity the check pins down
  double value = 0;    // worst measured deviation, in units of the check's tolerance class
  double target = 0;
  double tol = 0;
  bool pass = false;
  double ms = 0;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  int n_pass = 0;
  int n_fail = 0;
  bool all_pass() const { return n_fail == 0; }
};

// Known check ids, in report order.
std::vector<std::string> check_ids();

// Run the selected checks ("all" when selection is empty).  tol_overrides
// replaces the primary tolerance of a check id; every sub-tolerance of that
// check is rescaled by the same factor.  Unknown ids throw, listing the
// available ones.  threads = 0 picks CURVMASS_THREADS or the hardware count.
VerificationReport run_suite(const std::vector<std::string>& selection = {},
                             const std::map<std::string, double>& tol_overrides = {},
                             unsigned threads = 0);

std::string report_to_json(const VerificationReport& report);

}  // namespace curvmass::verify
