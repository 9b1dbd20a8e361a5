// Acceptance suite runner: one [PASS]/[FAIL] line per criterion.
//   regsmc_acceptance [--criterion N]... [--tamper-gain X]
// Exit status is nonzero iff any selected criterion fails.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "regsmc/acceptance.hpp"

int main(int argc, char** argv) {
  regsmc::AcceptanceOptions opt = regsmc::acceptance_options_from_env();
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if ((a == "--criterion" || a == "-c") && i + 1 < argc) {
      const int id = std::atoi(argv[++i]);
      if (id < 1 || id > regsmc::kCriterionCount) {
        std::cerr << "criterion must be in 1.." << regsmc::kCriterionCount << '\n';
        return 2;
      }
      ids.push_back(id);
    } else if (a == "--tamper-gain" && i + 1 < argc) {
      opt.regularized_threshold_offset = std::strtod(argv[++i], nullptr);
    } else {
      std::cerr << "usage: " << argv[0] << " [--criterion N]... [--tamper-gain X]\n";
      return 2;
    }
  }
  const auto results = regsmc::run_acceptance(opt, ids, std::cout);
  for (const auto& r : results) {
    if (!r.passed) return 1;
  }
  return 0;
}
