#pragma once

#include <functional>
#include <string>
#include <vector>

#include "zeno/params.hpp"

namespace zeno {

/// Inputs shared by the cross-validation checks. Defaults are the reference configuration
/// (tau_bar = 0.9 pi, g_bar = 1, dp_bar = 0.4, D = 80, 64 momentum nodes).
struct CheckConfig {
  SystemParams params{};
  int fock_dim = 80;
  int propagator_dim = 120;
  int p_quad_order = 64;
  int alpha_quad_order = 32;
  unsigned threads = 0;
};

struct CheckResult {
  int id = 0;
  std::string name;
  std::string measure;  // what `observed` and `tolerance` refer to
  double tolerance = 0.0;
  double observed = 0.0;
  bool passed = false;
  std::string detail;
};

struct CheckCase {
  int id;
  std::string name;
  std::function<CheckResult(const CheckConfig&)> run;
};

/// All closed-form vs oracle checks, one per acceptance criterion, in order.
const std::vector<CheckCase>& check_catalog();

/// Runs one case; library errors (gates tripping, bad regimes) become a failed result.
CheckResult run_check(const CheckCase& c, const CheckConfig& cfg);

std::vector<CheckResult> run_all_checks(const CheckConfig& cfg);

}  // namespace zeno
