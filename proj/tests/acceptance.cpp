// Acceptance suite: runs every verification criterion at full scale and
// prints one line per criterion. Exits nonzero if anything fails.
//
// DENSBOUND_ACCEPT_SCALE (default 1.0) shrinks or grows the Monte Carlo
// sample sizes for quick smoke runs; the shipped tolerances are calibrated
// for scale 1.

#include <cstdio>
#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include "densbound/verify.hpp"

int main() {
  double scale = 1.0;
  if (const char* s = std::getenv("DENSBOUND_ACCEPT_SCALE")) scale = std::atof(s);

  std::vector<densbound::verify::Check> checks;
  try {
    checks = densbound::verify::run_suite("all", {scale, 0});
  } catch (const std::exception& e) {
    std::printf("FATAL: suite aborted: %s\n", e.what());
    return 1;
  }

  // One line per criterion: pass only if every check under it passed.
  std::map<int, bool> pass;
  std::map<int, std::string> note;
  for (const auto& c : checks) {
    auto [it, fresh] = pass.emplace(c.criterion, true);
    it->second = it->second && c.pass;
    if (!c.pass) {
      if (!note[c.criterion].empty()) note[c.criterion] += "; ";
      note[c.criterion] +=
          c.name + " (measured " + std::to_string(c.measured) + " vs tol " +
          std::to_string(c.tolerance) + (c.detail.empty() ? "" : ", " + c.detail) + ")";
    }
  }

  bool all_ok = true;
  for (const auto& [criterion, ok] : pass) {
    all_ok = all_ok && ok;
    std::printf("criterion %2d: %s%s%s\n", criterion, ok ? "PASS" : "FAIL",
                ok ? "" : " -- ", ok ? "" : note[criterion].c_str());
  }
  std::printf("acceptance: %s (%zu checks, scale %g)\n", all_ok ? "PASS" : "FAIL",
              checks.size(), scale);
  return all_ok ? 0 : 1;
}
