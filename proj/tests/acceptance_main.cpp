// One line per acceptance criterion; exit status 0 only if all pass.

#include <cstdlib>
#include <iostream>
#include <string>

#include "acceptance.hpp"

int main(int argc, char** argv) {
  std::uint64_t seed = octa::acceptance::kDefaultSeed;
  if (argc > 1) seed = std::strtoull(argv[1], nullptr, 10);
  int failed = 0;
  for (const auto& r : octa::acceptance::run_all(seed)) {
    std::cout << octa::acceptance::format(r) << std::endl;
    failed += !r.pass;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
            << std::endl;
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
