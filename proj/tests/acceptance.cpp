// One line per acceptance criterion; exit status is nonzero if any fails.
#include <cstdio>

#include "zeno/checks.hpp"

int main() {
  const zeno::CheckConfig cfg;
  int failures = 0;
  for (const auto& r : zeno::run_all_checks(cfg)) {
    if (!r.passed) ++failures;
    std::printf("%s criterion %2d  %-44s %s = %.3e (tol %.1e)%s%s\n", r.passed ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.measure.c_str(), r.observed, r.tolerance, r.detail.empty() ? "" : "  ",
                r.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, zeno::check_catalog().size());
  return failures == 0 ? 0 : 1;
}
