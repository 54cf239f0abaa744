// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed checks.
#include <iostream>

#include "heatlab/verify.hpp"

int main() {
  try {
    return heatlab::print_suite("acceptance", std::cout, "out/acceptance");
  } catch (const std::exception& e) {
    std::cerr << "acceptance suite aborted: " << e.what() << "\n";
    return 99;
  }
}
