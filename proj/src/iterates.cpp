#include "zeno/iterates.hpp"

#include <cmath>
#include <string>

#include "zeno/errors.hpp"

namespace zeno {

double StepClosure::cosh2_r() const { return 1.0 / (1.0 - std::norm(zeta_N)); }

StepClosure step_closure(const ProjectedKernel& kernel, std::int64_t n_steps) {
  if (n_steps < 1) throw InvalidParams("step_closure: N must be >= 1, got " + std::to_string(n_steps));
  require_distilling(kernel);

  const double n = static_cast<double>(n_steps);
  // lambda^{2N}; underflows cleanly to 0 for large N since |lambda| < 1.
  const cplx l2n = std::exp(2.0 * n * kernel.log_lambda);
  const cplx coth = (1.0 + l2n) / (l2n - 1.0);
  const cplx ratio = kernel.g_q_tilde / kernel.root;

  StepClosure c;
  c.n_steps = n_steps;
  c.zeta_N = kernel.G / (kernel.g_q_tilde - kernel.root * coth);
  c.kappa_N = -n * kernel.log_lambda + std::log(0.5 * (1.0 + l2n) - 0.5 * ratio * (l2n - 1.0));
  c.r_N = std::atanh(std::abs(c.zeta_N));
  c.phi_N = std::arg(c.zeta_N);
  c.xi_N = std::polar(c.r_N, c.phi_N);
  c.log_prefactor = n * kernel.log_M();
  return c;
}

AmplitudeImage propagate_amplitude(const StepClosure& c, cplx alpha) {
  const double ch2 = c.cosh2_r();
  const cplx e_k = std::exp(-c.kappa_N);
  const cplx e_kc = std::conj(e_k);
  const cplx e_2k = e_k * e_k;
  const double e_2re = std::norm(e_k);

  AmplitudeImage img;
  img.alpha_N = (alpha * e_k - std::conj(alpha) * c.zeta_N * e_kc) * ch2;
  const cplx bracket = c.kappa_N + std::norm(alpha) * (1.0 - e_2re * ch2) +
                       alpha * alpha * (c.zeta_N + std::conj(c.zeta_N) * e_2k * ch2);
  // ln sqrt(cosh r) = ln(cosh^2 r) / 4.
  img.logM_N = c.log_prefactor + 0.25 * std::log(ch2) - 0.5 * bracket;
  return img;
}

}  // namespace zeno

namespace zeno {

cplx zeta_deviation(const ProjectedKernel& kernel, std::int64_t n_steps) {
  if (n_steps < 1) throw InvalidParams("zeta_deviation: N must be >= 1");
  require_distilling(kernel);
  const cplx l2n = std::exp(2.0 * static_cast<double>(n_steps) * kernel.log_lambda);
  const cplx coth = (1.0 + l2n) / (l2n - 1.0);
  const cplx finite_den = kernel.g_q_tilde - kernel.root * coth;
  const cplx limit_den = kernel.g_q_tilde + kernel.root;
  return 2.0 * kernel.G * kernel.root * l2n / ((l2n - 1.0) * finite_den * limit_den);
}

}  // namespace zeno
