#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "zeno/iterates.hpp"
#include "zeno/params.hpp"
#include "zeno/squeezed.hpp"

namespace zeno {

// Observables after N confirmations of the probe for a field prepared in |alpha0>.
// All of these require a Distilling kernel and propagate DegenerateKernel /
// MarginalKernel otherwise.

/// The field state |alpha_N, xi_N>.
SqueezedCoherentLabel evolved_state(const ProjectedKernel& kernel, cplx alpha0, std::int64_t n);

/// ln P(N tau) = 2 Re ln M_N(alpha0).
double survival_log_prob(const ProjectedKernel& kernel, cplx alpha0, std::int64_t n);

double fidelity_to_target(const ProjectedKernel& kernel, cplx alpha0, std::int64_t n);

/// sinh^2 r_N + |alpha_N|^2.
double mean_quanta(const ProjectedKernel& kernel, cplx alpha0, std::int64_t n);

/// The variant |zeta_N| / (1 - |zeta_N|^2) + |alpha_N|^2. It does not agree with
/// sinh^2 r_N (which is |zeta_N|^2 / (1 - |zeta_N|^2)); kept only so the discrepancy can be reported.
double mean_quanta_abs_zeta_variant(const ProjectedKernel& kernel, cplx alpha0, std::int64_t n);

struct DistillRecord {
  std::int64_t n = 0;
  double log_p = 0.0;
  double fidelity = 0.0;
  double mean_quanta = 0.0;
  SqueezedCoherentLabel state;
};

DistillRecord distill_record(const ProjectedKernel& kernel, const TargetSqueeze& target, cplx alpha0,
                             std::int64_t n);

/// Rows for N = 1..n_max.
std::vector<DistillRecord> distill_series(const ProjectedKernel& kernel, cplx alpha0, std::int64_t n_max);

struct ZenoRow {
  std::int64_t n = 0;
  double tau_bar = 0.0;
  Regime regime = Regime::Distilling;
  double log_p = 0.0;     // NaN unless regime == Distilling
  double fidelity = 0.0;  // to the freely rotated coherent state |alpha0 e^{-i t_bar}>

  bool ok() const { return regime == Regime::Distilling; }
};

/// Fixed total time t_bar split into N measurement intervals tau_bar = t_bar / N.
/// couplings.tau_bar is ignored. Non-distilling rows are flagged, not thrown.
std::vector<ZenoRow> zeno_series(const SystemParams& couplings, double t_bar, cplx alpha0,
                                 std::span<const std::int64_t> ns);

}  // namespace zeno
