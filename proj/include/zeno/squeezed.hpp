#pragma once

#include "zeno/params.hpp"

namespace zeno {

/// |alpha, xi> = D(alpha) S(xi) |0>, S(xi) = exp[(xi* a^2 - xi a^2dag)/2], xi = r e^{i phi}.
struct SqueezedCoherentLabel {
  cplx alpha;
  cplx xi;

  double r() const { return std::abs(xi); }
  double phi() const { return std::arg(xi); }
  /// e^{i phi} tanh r: the a^2dag coefficient of the normal-ordered form.
  cplx zeta() const;
  /// sinh^2 r + |alpha|^2.
  double mean_quanta() const;
};

/// |<xi| alpha_N, xi_N>|^2 from the closed form in (r, phi, r_N, phi_N, |alpha_N|, theta_N).
/// theta_N = arg alpha_N is taken as 0 when alpha_N = 0 (its prefactor |alpha_N|^2 vanishes).
double target_fidelity(const SqueezedCoherentLabel& state, const TargetSqueeze& target);

/// |<a|b>|^2 for two arbitrary squeezed coherent states, through the normal-ordered
/// representation exp(-zeta a^2dag/2 + beta a^dag)|0>. Independent of target_fidelity.
double overlap_squared(const SqueezedCoherentLabel& a, const SqueezedCoherentLabel& b);

}  // namespace zeno
