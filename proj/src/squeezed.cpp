#include "zeno/squeezed.hpp"

#include <cmath>

namespace zeno {

cplx SqueezedCoherentLabel::zeta() const { return std::polar(std::tanh(r()), phi()); }

double SqueezedCoherentLabel::mean_quanta() const {
  const double s = std::sinh(r());
  return s * s + std::norm(alpha);
}

double target_fidelity(const SqueezedCoherentLabel& state, const TargetSqueeze& target) {
  const double r = target.r;
  const double phi = target.phi;
  const double rn = state.r();
  const double phin = state.phi();
  const double a2 = std::norm(state.alpha);
  const double theta = a2 > 0.0 ? std::arg(state.alpha) : 0.0;

  const double denom = 1.0 + std::cosh(2.0 * r) * std::cosh(2.0 * rn) -
                       std::sinh(2.0 * r) * std::sinh(2.0 * rn) * std::cos(phi - phin);
  const double numer = std::cosh(2.0 * r) + std::cosh(2.0 * rn) + std::sinh(2.0 * r) * std::cos(phi - 2.0 * theta) +
                       std::sinh(2.0 * rn) * std::cos(phin - 2.0 * theta);
  return std::exp(-a2 * numer / denom) * std::sqrt(2.0 / denom);
}

namespace {

// ln |C|^2 where |alpha, xi> = C exp(-zeta a^2dag/2 + beta a^dag)|0>.
double log_norm_factor(const SqueezedCoherentLabel& s) {
  const cplx ca = std::conj(s.alpha);
  return -std::log(std::cosh(s.r())) - std::norm(s.alpha) - std::real(s.zeta() * ca * ca);
}

}  // namespace

double overlap_squared(const SqueezedCoherentLabel& a, const SqueezedCoherentLabel& b) {
  const cplx za = a.zeta();
  const cplx zb = b.zeta();
  const cplx ba = a.alpha + za * std::conj(a.alpha);
  const cplx bb = b.alpha + zb * std::conj(b.alpha);
  const cplx ba_c = std::conj(ba);
  const cplx den = 1.0 - std::conj(za) * zb;
  const cplx expo = (-zb * ba_c * ba_c - std::conj(za) * bb * bb + 2.0 * ba_c * bb) / (2.0 * den);
  const double log_f = log_norm_factor(a) + log_norm_factor(b) - std::log(std::abs(den)) + 2.0 * expo.real();
  return std::exp(log_f);
}

}  // namespace zeno
