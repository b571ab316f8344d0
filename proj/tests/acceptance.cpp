#include <cstdio>

#include "multigauss/acceptance.hpp"

int main() {
  int failures = 0;
  for (const auto& r : mg::run_acceptance(4)) {
    std::printf("criterion %2d [%-24s] %s  (%.1fs)  %s\n", r.id,
                r.name.c_str(), r.pass ? "PASS" : "FAIL", r.seconds,
                r.detail.c_str());
    std::fflush(stdout);
    if (!r.pass) ++failures;
  }
  if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
