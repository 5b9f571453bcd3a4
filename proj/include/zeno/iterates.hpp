#pragma once

#include <cstdint>

#include "zeno/params.hpp"

namespace zeno {

/// Closed-form parameters of V^N = M^N e^{-zeta_N a^2dag/2} e^{-kappa_N (a^dag a + 1/2)} e^{-zeta_N a^2/2}.
///
/// kappa_N is kept in the split form -N ln(lambda) + ln[...] so it stays finite for any N.
struct StepClosure {
  std::int64_t n_steps = 1;
  cplx zeta_N;
  cplx kappa_N;
  cplx xi_N;
  double r_N = 0.0;
  double phi_N = 0.0;
  /// N ln M.
  cplx log_prefactor;

  double cosh2_r() const;  // cosh^2 r_N = 1 / (1 - |zeta_N|^2)
};

/// Image of a coherent state: V^N |alpha> = exp(logM_N) |alpha_N, xi_N>.
struct AmplitudeImage {
  cplx alpha_N;
  cplx logM_N;
};

StepClosure step_closure(const ProjectedKernel& kernel, std::int64_t n_steps);

AmplitudeImage propagate_amplitude(const StepClosure& closure, cplx alpha);

}  // namespace zeno

namespace zeno {

/// zeta_N - zeta_inf, rearranged so it is proportional to lambda^{2N} and free of cancellation:
///   2 G root lambda^{2N} / ((lambda^{2N} - 1) (G q_tilde - root coth) (G q_tilde + root)).
cplx zeta_deviation(const ProjectedKernel& kernel, std::int64_t n_steps);

}  // namespace zeno
