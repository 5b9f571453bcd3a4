#include "zeno/coherent_track.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "zeno/errors.hpp"

namespace zeno {

SqueezedCoherentLabel evolved_state(const ProjectedKernel& kernel, cplx alpha0, std::int64_t n) {
  const StepClosure c = step_closure(kernel, n);
  return {propagate_amplitude(c, alpha0).alpha_N, c.xi_N};
}

double survival_log_prob(const ProjectedKernel& kernel, cplx alpha0, std::int64_t n) {
  const StepClosure c = step_closure(kernel, n);
  return 2.0 * propagate_amplitude(c, alpha0).logM_N.real();
}

double fidelity_to_target(const ProjectedKernel& kernel, cplx alpha0, std::int64_t n) {
  return target_fidelity(evolved_state(kernel, alpha0, n), target_squeeze(kernel));
}

double mean_quanta(const ProjectedKernel& kernel, cplx alpha0, std::int64_t n) {
  return evolved_state(kernel, alpha0, n).mean_quanta();
}

double mean_quanta_abs_zeta_variant(const ProjectedKernel& kernel, cplx alpha0, std::int64_t n) {
  const StepClosure c = step_closure(kernel, n);
  const double z = std::abs(c.zeta_N);
  return z / (1.0 - z * z) + std::norm(propagate_amplitude(c, alpha0).alpha_N);
}

DistillRecord distill_record(const ProjectedKernel& kernel, const TargetSqueeze& target, cplx alpha0,
                             std::int64_t n) {
  const StepClosure c = step_closure(kernel, n);
  const AmplitudeImage img = propagate_amplitude(c, alpha0);
  DistillRecord rec;
  rec.n = n;
  rec.state = {img.alpha_N, c.xi_N};
  rec.log_p = 2.0 * img.logM_N.real();
  rec.fidelity = target_fidelity(rec.state, target);
  rec.mean_quanta = rec.state.mean_quanta();
  return rec;
}

std::vector<DistillRecord> distill_series(const ProjectedKernel& kernel, cplx alpha0, std::int64_t n_max) {
  if (n_max < 1) throw InvalidParams("distill_series: n_max must be >= 1, got " + std::to_string(n_max));
  const TargetSqueeze target = target_squeeze(kernel);
  std::vector<DistillRecord> out;
  out.reserve(static_cast<std::size_t>(n_max));
  for (std::int64_t n = 1; n <= n_max; ++n) out.push_back(distill_record(kernel, target, alpha0, n));
  return out;
}

std::vector<ZenoRow> zeno_series(const SystemParams& couplings, double t_bar, cplx alpha0,
                                 std::span<const std::int64_t> ns) {
  if (!(t_bar > 0.0) || !std::isfinite(t_bar)) throw InvalidParams("zeno_series: t_bar must be > 0");
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  const SqueezedCoherentLabel rotated{alpha0 * std::polar(1.0, -t_bar), cplx(0.0, 0.0)};

  std::vector<ZenoRow> rows;
  rows.reserve(ns.size());
  for (const std::int64_t n : ns) {
    if (n < 1) throw InvalidParams("zeno_series: N must be >= 1, got " + std::to_string(n));
    ZenoRow row;
    row.n = n;
    row.tau_bar = t_bar / static_cast<double>(n);
    const ProjectedKernel kernel = inspect_kernel(couplings.with_tau(row.tau_bar));
    row.regime = kernel.regime;
    if (!row.ok()) {
      row.log_p = nan;
      row.fidelity = nan;
    } else {
      const StepClosure c = step_closure(kernel, n);
      const AmplitudeImage img = propagate_amplitude(c, alpha0);
      row.log_p = 2.0 * img.logM_N.real();
      row.fidelity = overlap_squared({img.alpha_N, c.xi_N}, rotated);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace zeno
