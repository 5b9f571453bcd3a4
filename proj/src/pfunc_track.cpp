#include "zeno/pfunc_track.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "zeno/errors.hpp"
#include "zeno/quadrature.hpp"

namespace zeno {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

struct LogRow {
  double log_weight;
  SqueezedCoherentLabel label;
};

// Normalizes log weights in place order; returns ln(sum).
FieldEnsemble normalize(const std::vector<LogRow>& raw) {
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& r : raw) top = std::max(top, r.log_weight);
  if (!std::isfinite(top)) throw QuadratureNotConverged("ensemble has no finite weight");
  double sum = 0.0;
  for (const auto& r : raw) sum += std::exp(r.log_weight - top);
  FieldEnsemble e;
  e.log_normalization = top + std::log(sum);
  e.rows.reserve(raw.size());
  for (const auto& r : raw) e.rows.push_back({std::exp(r.log_weight - top) / sum, r.label});
  return e;
}

FieldEnsemble evolve_points(const StepClosure& c, const std::vector<PhasePoint>& points) {
  std::vector<LogRow> raw;
  raw.reserve(points.size());
  for (const auto& pt : points) {
    const AmplitudeImage img = propagate_amplitude(c, pt.alpha);
    raw.push_back({std::log(pt.weight) + 2.0 * img.logM_N.real(), {img.alpha_N, c.xi_N}});
  }
  return normalize(raw);
}

// |M_N(alpha)|^2 = const * exp(-A|alpha|^2 - Re(B alpha^2)); the thermal integral converges
// only if 1/nbar + A > |B|.
void check_thermal_integrable(const StepClosure& c, const ThermalP& th) {
  const double ch2 = c.cosh2_r();
  const cplx e_k = std::exp(-c.kappa_N);
  const double A = 1.0 - std::norm(e_k) * ch2;
  const cplx B = c.zeta_N + std::conj(c.zeta_N) * e_k * e_k * ch2;
  const double margin = 1.0 / th.nbar + A - std::abs(B);
  if (!(margin > 0.0)) {
    std::ostringstream os;
    os << "thermal P-integral diverges at N = " << c.n_steps << " (nbar = " << th.nbar
       << ", decay margin = " << margin << ")";
    throw QuadratureNotConverged(os.str());
  }
}

}  // namespace

void validate(const PFunction& pfunc) {
  std::visit(overloaded{
                 [](const DeltaP& d) {
                   if (!std::isfinite(d.alpha0.real()) || !std::isfinite(d.alpha0.imag()))
                     throw InvalidParams("delta P-function: non-finite alpha0");
                 },
                 [](const CoherentMixtureP& m) {
                   if (m.components.empty()) throw InvalidParams("coherent mixture: no components");
                   double total = 0.0;
                   for (const auto& c : m.components) {
                     if (!(c.weight > 0.0)) throw InvalidParams("coherent mixture: weights must be > 0");
                     if (!std::isfinite(c.alpha.real()) || !std::isfinite(c.alpha.imag()))
                       throw InvalidParams("coherent mixture: non-finite amplitude");
                     total += c.weight;
                   }
                   if (std::abs(total - 1.0) > 1e-12) {
                     std::ostringstream os;
                     os << "coherent mixture: weights sum to " << total << ", expected 1";
                     throw InvalidParams(os.str());
                   }
                 },
                 [](const ThermalP& t) {
                   if (!(t.nbar > 0.0) || !std::isfinite(t.nbar)) throw InvalidParams("thermal P-function: nbar must be > 0");
                   if (!std::isfinite(t.center.real()) || !std::isfinite(t.center.imag()))
                     throw InvalidParams("thermal P-function: non-finite center");
                 },
             },
             pfunc);
}

std::vector<PhasePoint> phase_points(const PFunction& pfunc, int order) {
  validate(pfunc);
  return std::visit(overloaded{
                        [](const DeltaP& d) { return std::vector<PhasePoint>{{1.0, d.alpha0}}; },
                        [](const CoherentMixtureP& m) {
                          std::vector<PhasePoint> pts;
                          for (const auto& c : m.components) pts.push_back({c.weight, c.alpha});
                          return pts;
                        },
                        [order](const ThermalP& t) {
                          // alpha = center + sqrt(nbar) (x + i y), Pi d^2alpha = e^{-x^2-y^2} dx dy / pi.
                          const GaussRule rule = gauss_hermite(order);
                          const double s = std::sqrt(t.nbar);
                          std::vector<PhasePoint> pts;
                          pts.reserve(rule.size() * rule.size());
                          for (std::size_t i = 0; i < rule.size(); ++i)
                            for (std::size_t j = 0; j < rule.size(); ++j)
                              pts.push_back({rule.weights[i] * rule.weights[j] / M_PI,
                                             t.center + s * cplx(rule.nodes[i], rule.nodes[j])});
                          return pts;
                        },
                    },
                    pfunc);
}

double FieldEnsemble::normalization() const { return std::exp(log_normalization); }

FieldEnsemble evolve_ensemble(const ProjectedKernel& kernel, const PFunction& pfunc, std::int64_t n,
                              const QuadratureOptions& opts) {
  const StepClosure c = step_closure(kernel, n);
  const auto* thermal = std::get_if<ThermalP>(&pfunc);
  if (thermal) check_thermal_integrable(c, *thermal);

  FieldEnsemble e = evolve_points(c, phase_points(pfunc, opts.order));
  if (thermal && opts.convergence_gate) {
    const FieldEnsemble fine = evolve_points(c, phase_points(pfunc, 2 * opts.order));
    const double rel = std::abs(std::expm1(fine.log_normalization - e.log_normalization));
    if (!(rel <= opts.tolerance)) {
      std::ostringstream os;
      os << "thermal quadrature order " << opts.order << " -> " << 2 * opts.order << " changed P(N tau) by " << rel
         << " relative (tolerance " << opts.tolerance << ")";
      throw QuadratureNotConverged(os.str());
    }
  }
  return e;
}

double ensemble_mean_quanta(const FieldEnsemble& ensemble, const StepClosure& closure) {
  const double s = std::sinh(closure.r_N);
  double displaced = 0.0;
  for (const auto& row : ensemble.rows) displaced += row.weight * std::norm(row.label.alpha);
  return s * s + displaced;
}

double ensemble_fidelity(const FieldEnsemble& ensemble, const TargetSqueeze& target, const StepClosure& closure) {
  double f = 0.0;
  for (const auto& row : ensemble.rows) f += row.weight * target_fidelity({row.label.alpha, closure.xi_N}, target);
  return f;
}

}  // namespace zeno
