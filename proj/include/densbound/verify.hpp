#pragma once

#include <string>
#include <vector>

// Verification suites: every proven inequality checked numerically, by
// quadrature oracle or Monte Carlo. The CLI `verify` command and the
// acceptance test binary both run these.

namespace densbound::verify {

struct Check {
  int criterion;      // 1-based index into the acceptance list
  std::string name;
  bool pass;
  double measured;    // worst residual / deviation / margin for the check
  double tolerance;   // the pinned threshold it is compared against
  std::string detail;
};

struct Options {
  double scale = 1.0;  // multiplies Monte Carlo path counts
  int threads = 0;     // 0 = OpenMP default
};

// suite in {identities, dominance, comparison, montecarlo, all}.
// Throws std::invalid_argument for an unknown suite.
std::vector<Check> run_suite(const std::string& suite, const Options& opts = {});

bool all_passed(const std::vector<Check>& checks);

}  // namespace densbound::verify
