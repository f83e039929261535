// Acceptance gate: runs every verification check and prints one line per
// criterion.  Exit code 0 iff all pass.
//
// Two checks carry sub-assertions that are red by construction of their
// sample grids; both assert deviation-monotonicity across a point where the
// monitored quantity crosses its limit, so the deviation necessarily rebounds
// inside the grid.  They are kept as specified rather than weakened:
//
//  * gamma-ratio-asymptotics: G(1/2)G(c)/(G(a+1)G(b+1)) divided by
//    (3 sqrt(pi)/4)(p-1)^{3/2} evaluates to 0.9533, 1.0214, 1.0371, 1.0292
//    at p = 1.2, 1.1, 1.05, 1.02 (crosses 1 near p = 1.12, peaks near 1.05).
//    The refined-grid convergence (monotone on p = 1.02, 1.01, 1.005, 1.002)
//    is covered in tests/test_specfun.cpp.
//
//  * p-to-one-trends: at lambda = 0.3, t = 1, the gap
//    |e^{lambda_p(1)} - e^{1/2}/16 pi| evaluates to 3.0e-3, 4.9e-7, 1.19e-3,
//    1.11e-3 along p = 1.3, 1.2, 1.1, 1.05: e^{lambda_p(1)} crosses its
//    p -> 1 limit near p = 1.2, so the step 1.2 -> 1.1 rebounds.  The
//    mu e^lambda gap and both t = 3 trends are strictly monotone and pass.

#include <cstdio>

#include "curvmass/verify.hpp"

int main() {
  using namespace curvmass::verify;
  const VerificationReport report = run_suite();
  int criterion = 0;
  for (const auto& c : report.checks) {
    ++criterion;
    std::printf("%-4s criterion %2d  %-34s value %.3e  tol %.3e  (%.0f ms)\n",
                c.pass ? "PASS" : "FAIL", criterion, c.id.c_str(), c.value,
                c.tol, c.ms);
  }
  std::printf("%d passed, %d failed\n", report.n_pass, report.n_fail);
  return report.all_pass() ? 0 : 1;
}
