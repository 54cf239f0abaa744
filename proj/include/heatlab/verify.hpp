#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace heatlab {

struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0;  // measured residual or quantity
  double tol = 0;    // acceptance bound for value
  std::string detail;
};

// Suites: geometry, barriers, criteria, solver, acceptance, all.
// Throws UsageError (listing the suites) for unknown names.
std::vector<CheckResult> run_suite(const std::string& suite,
                                   const std::string& scratch_dir = "out");

// Prints one line per check with its residual and tolerance; returns the
// number of failures.
int print_suite(const std::string& suite, std::ostream& os,
                const std::string& scratch_dir = "out");

}  // namespace heatlab
