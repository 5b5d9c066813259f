// Runs every numbered acceptance criterion and prints one line per criterion.
#include "heavenly/suite.hpp"

#include <iostream>

int main() {
  using namespace heavenly;
  int failed = 0;
  for (const auto& c : run_acceptance()) {
    std::cout << format_line(c) << "\n";
    if (!c.pass) ++failed;
  }
  std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
