// Runs acceptance criteria 1..11 and prints one line per criterion.
#include <cstring>
#include <iostream>

#include "lockstep/suite.hpp"

int main(int argc, char** argv) {
  const bool timings = argc > 1 && std::strcmp(argv[1], "--timings") == 0;
  bool all = true;
  lockstep::run_acceptance([&](const lockstep::CriterionResult& r) {
    std::cout << lockstep::format_result(r, timings) << std::endl;
    all = all && r.passed;
  });
  return all ? 0 : 1;
}
