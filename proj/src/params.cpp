#include "zeno/params.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "zeno/errors.hpp"

namespace zeno {

namespace detail {

double one_minus_sinc(double t) {
  if (std::abs(t) < 0.5) {
    // t^2/3! - t^4/5! + ..., nested from the far end; truncation error below 1e-20 relative.
    const double t2 = t * t;
    double acc = 1.0;
    for (int k = 9; k >= 2; --k) acc = 1.0 - acc * t2 / ((2.0 * k) * (2.0 * k + 1.0));
    return t2 / 6.0 * acc;
  }
  return 1.0 - std::sin(t) / t;
}

}  // namespace detail

using detail::one_minus_sinc;

void SystemParams::validate() const {
  auto fail = [this](const char* what) {
    std::ostringstream os;
    os << "invalid parameters (" << what << "): tau_bar=" << tau_bar << " g_bar=" << g_bar
       << " dp_bar=" << dp_bar;
    throw InvalidParams(os.str());
  };
  if (!std::isfinite(tau_bar) || !std::isfinite(g_bar) || !std::isfinite(dp_bar)) fail("non-finite");
  if (tau_bar <= 0.0) fail("tau_bar must be > 0");
  if (dp_bar <= 0.0) fail("dp_bar must be > 0");
  if (g_bar < 0.0) fail("g_bar must be >= 0");
}

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::Distilling:
      return "distilling";
    case Regime::Marginal:
      return "marginal";
    case Regime::Degenerate:
      return "degenerate";
  }
  return "unknown";
}

ScaleConstants scale_constants(const SystemParams& params) {
  params.validate();
  const double t = params.tau_bar;
  const double g2 = params.g_bar * params.g_bar;
  const double d2 = params.dp_bar * params.dp_bar;
  const double phase = t * (1.0 - 2.0 * g2 * one_minus_sinc(t));
  const cplx M = 1.0 / std::sqrt(cplx(1.0, d2 * phase));
  const double half_sin = std::sin(0.5 * t);
  const cplx G = 2.0 * M * M * g2 * d2 * (2.0 * half_sin * half_sin);
  return {M, G};
}

ProjectedKernel inspect_kernel(const SystemParams& params) {
  const auto [M, G] = scale_constants(params);
  const double t = params.tau_bar;
  const double c = std::cos(t);
  const double s = std::sin(t);
  const double half_sin = std::sin(0.5 * t);

  ProjectedKernel k;
  k.M = M;
  k.G = G;
  k.q = cplx(c, 0.0) + cplx(0.0, 1.0) * G * s;
  k.g_q_tilde = G * c + cplx(0.0, s);

  // q^2 - 1 = (q - 1)(q + 1) keeps relative precision as tau -> 0.
  const cplx q_minus_1 = cplx(-2.0 * half_sin * half_sin, 0.0) + cplx(0.0, 1.0) * G * s;
  const cplx q_plus_1 = k.q + 1.0;
  cplx root = std::sqrt(q_minus_1 * q_plus_1);
  if (std::abs(k.q - root) > 1.0) root = -root;
  k.root = root;
  k.lambda = k.q - root;
  k.log_lambda = std::log(k.lambda);

  if (std::abs(G) < kDegenerateG) {
    k.regime = Regime::Degenerate;
    k.q_tilde = cplx(std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN());
    return k;
  }
  k.q_tilde = k.g_q_tilde / G;
  k.regime = std::abs(std::abs(k.lambda) - 1.0) < kMarginalGap ? Regime::Marginal : Regime::Distilling;
  return k;
}

void require_distilling(const ProjectedKernel& kernel) {
  if (kernel.regime == Regime::Degenerate)
    throw DegenerateKernel("degenerate kernel: G = 0, q_tilde undefined and distillation inapplicable");
  if (kernel.regime == Regime::Marginal)
    throw MarginalKernel("marginal kernel: |lambda| = 1, no eigenvalue gap");
}

ProjectedKernel derive_kernel(const SystemParams& params) {
  ProjectedKernel k = inspect_kernel(params);
  require_distilling(k);
  return k;
}

double TargetSqueeze::mean_quanta() const {
  const double s = std::sinh(r);
  return s * s;
}

TargetSqueeze squeeze_from_zeta(cplx zeta) {
  if (!(std::abs(zeta) < 1.0)) throw InvalidParams("squeeze parameter needs |zeta| < 1");
  TargetSqueeze t;
  t.zeta = zeta;
  t.r = std::atanh(std::abs(zeta));
  t.phi = std::arg(zeta);
  return t;
}

TargetSqueeze target_squeeze(const ProjectedKernel& kernel) {
  require_distilling(kernel);
  return squeeze_from_zeta(kernel.G / (kernel.g_q_tilde + kernel.root));
}

}  // namespace zeno
