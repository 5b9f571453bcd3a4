#pragma once

#include <complex>
#include <string_view>

namespace zeno {

using cplx = std::complex<double>;

/// Dimensionless knobs of the particle + field-mode model.
///
/// tau_bar = omega*tau, g_bar = g*sqrt(m/(hbar*omega)),
/// dp_bar = Delta p_0 / sqrt(m*hbar*omega). Everything else derives from these.
struct SystemParams {
  double tau_bar = 0.9 * 3.14159265358979323846;
  double g_bar = 1.0;
  double dp_bar = 0.4;

  /// Throws InvalidParams unless tau_bar > 0, dp_bar > 0, g_bar >= 0, all finite.
  void validate() const;

  SystemParams with_tau(double t) const {
    SystemParams p = *this;
    p.tau_bar = t;
    return p;
  }
};

enum class Regime { Distilling, Marginal, Degenerate };

std::string_view to_string(Regime r);

inline constexpr double kDegenerateG = 1e-14;
inline constexpr double kMarginalGap = 1e-12;

/// Constants of the single-measurement kernel
///   V = M exp{ ln(lambda)/sqrt(q^2-1) * G [ (a^2dag + a^2)/2 + q_tilde (a^dag a + 1/2) ] }.
///
/// `root` is the branch of sqrt(q^2-1) for which lambda = q - root has
/// |lambda| <= 1. q_tilde is NaN in the Degenerate regime.
struct ProjectedKernel {
  cplx M;
  cplx G;
  cplx q;
  cplx q_tilde;
  cplx root;
  cplx lambda;
  cplx log_lambda;
  /// G * q_tilde evaluated as G cos(tau) + i sin(tau), finite even when G = 0.
  cplx g_q_tilde;
  Regime regime = Regime::Distilling;

  cplx log_M() const { return std::log(M); }
};

/// M and G only; well defined for every valid parameter set (including G = 0).
struct ScaleConstants {
  cplx M;
  cplx G;
};

ScaleConstants scale_constants(const SystemParams& params);

/// Non-throwing kernel construction: regime is classified, nothing is rejected.
ProjectedKernel inspect_kernel(const SystemParams& params);

/// Throws DegenerateKernel / MarginalKernel unless the kernel is Distilling.
ProjectedKernel derive_kernel(const SystemParams& params);

/// The distillation fixed point |xi>, xi = r e^{i phi}, with zeta = e^{i phi} tanh r.
struct TargetSqueeze {
  cplx zeta;
  double r = 0.0;
  double phi = 0.0;

  cplx xi() const { return std::polar(r, phi); }
  double mean_quanta() const;
};

TargetSqueeze target_squeeze(const ProjectedKernel& kernel);

/// Builds r = artanh|zeta|, phi = arg zeta.
TargetSqueeze squeeze_from_zeta(cplx zeta);

void require_distilling(const ProjectedKernel& kernel);

namespace detail {
/// 1 - sin(t)/t, series-evaluated near t = 0.
double one_minus_sinc(double t);
}  // namespace detail

}  // namespace zeno
