#pragma once

#include <cmath>
#include <complex>
#include <random>

#include "zeno/params.hpp"

namespace zeno::test {

inline constexpr double kPi = 3.14159265358979323846;

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

inline double rel_err(cplx got, cplx want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

// Random valid parameter triple away from the degenerate points tau = 2 pi k.
inline SystemParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> tau(0.05, 6.0), g(0.05, 2.0), dp(0.05, 1.5);
  SystemParams p;
  p.tau_bar = tau(rng);
  p.g_bar = g(rng);
  p.dp_bar = dp(rng);
  return p;
}

}  // namespace zeno::test

#include "zeno/fock_oracle.hpp"

namespace zeno::test {

// Oracle V at the reference parameters, D = 80, built once per test binary.
inline const FockMatrix& reference_v() {
  static const FockMatrix v = projected_v_matrix(SystemParams{}, 80);
  return v;
}

}  // namespace zeno::test
