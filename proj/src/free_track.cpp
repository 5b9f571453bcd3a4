#include "zeno/free_track.hpp"

#include <cmath>
#include <sstream>

#include "zeno/errors.hpp"
#include "zeno/quadrature.hpp"

namespace zeno {

namespace {

void check_time(double t_bar) {
  if (!(t_bar >= 0.0) || !std::isfinite(t_bar)) {
    std::ostringstream os;
    os << "free evolution: t_bar must be finite and >= 0, got " << t_bar;
    throw InvalidParams(os.str());
  }
}

ScaleConstants free_constants(const SystemParams& couplings, double t_bar) {
  if (t_bar == 0.0) return {cplx(1.0, 0.0), cplx(0.0, 0.0)};
  return scale_constants(couplings.with_tau(t_bar));
}

// Integrand of the survival integral at one phase-space point.
double survival_density(const ScaleConstants& k, cplx alpha, double t_bar) {
  const double re_g = k.G.real();
  const double x = 2.0 * std::real(alpha * std::polar(1.0, -0.5 * t_bar));
  return std::norm(k.M) / std::sqrt(1.0 + 2.0 * re_g) * std::exp(-re_g / (1.0 + 2.0 * re_g) * x * x);
}

double phase_average(const std::vector<PhasePoint>& pts, auto&& f) {
  double acc = 0.0;
  for (const auto& p : pts) acc += p.weight * f(p.alpha);
  return acc;
}

template <class F>
double gated_average(const PFunction& pfunc, const QuadratureOptions& opts, F&& f, const char* what) {
  const double coarse = phase_average(phase_points(pfunc, opts.order), f);
  if (std::holds_alternative<ThermalP>(pfunc) && opts.convergence_gate) {
    const double fine = phase_average(phase_points(pfunc, 2 * opts.order), f);
    const double rel = std::abs(fine - coarse) / std::max(std::abs(fine), 1e-300);
    if (!(rel <= opts.tolerance)) {
      std::ostringstream os;
      os << what << ": quadrature order " << opts.order << " -> " << 2 * opts.order << " changed result by " << rel
         << " relative (tolerance " << opts.tolerance << ")";
      throw QuadratureNotConverged(os.str());
    }
  }
  return coarse;
}

}  // namespace

double free_survival(const SystemParams& couplings, const PFunction& pfunc, double t_bar,
                     const QuadratureOptions& opts) {
  check_time(t_bar);
  if (t_bar == 0.0) return 1.0;
  const ScaleConstants k = free_constants(couplings, t_bar);
  return gated_average(
      pfunc, opts, [&](cplx a) { return survival_density(k, a, t_bar); }, "free_survival");
}

FieldEnsemble free_field_ensemble(const SystemParams& couplings, const PFunction& pfunc, double t_bar,
                                  int p_quad_order, const QuadratureOptions& opts) {
  check_time(t_bar);
  const GaussRule p_rule = normal_expectation_rule(p_quad_order, couplings.dp_bar);
  const cplx g_t = couplings.g_bar * (1.0 - std::polar(1.0, t_bar));
  const cplx rot = std::polar(1.0, -t_bar);

  FieldEnsemble e;
  e.log_normalization = 0.0;
  for (const auto& pt : phase_points(pfunc, opts.order)) {
    for (std::size_t j = 0; j < p_rule.size(); ++j) {
      e.rows.push_back({pt.weight * p_rule.weights[j], {(pt.alpha + p_rule.nodes[j] * g_t) * rot, cplx(0.0, 0.0)}});
    }
  }
  return e;
}

double free_mean_quanta(const SystemParams& couplings, const PFunction& pfunc, double t_bar,
                        const QuadratureOptions& opts) {
  check_time(t_bar);
  const double exchange = couplings.dp_bar * couplings.dp_bar *
                          std::norm(couplings.g_bar * (1.0 - std::polar(1.0, t_bar)));
  return gated_average(
      pfunc, opts, [&](cplx a) { return std::norm(a) + exchange; }, "free_mean_quanta");
}

double free_mean_quanta_coherent(const SystemParams& couplings, cplx alpha0, double t_bar) {
  const double s = std::sin(0.5 * t_bar);
  return std::norm(alpha0) + 4.0 * couplings.g_bar * couplings.g_bar * couplings.dp_bar * couplings.dp_bar * s * s;
}

std::vector<FreeRecord> free_series(const SystemParams& couplings, const PFunction& pfunc,
                                    std::span<const double> t_grid, const QuadratureOptions& opts) {
  std::vector<FreeRecord> out;
  out.reserve(t_grid.size());
  for (const double t : t_grid)
    out.push_back({t, free_survival(couplings, pfunc, t, opts), free_mean_quanta(couplings, pfunc, t, opts)});
  return out;
}

}  // namespace zeno
