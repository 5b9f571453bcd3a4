#pragma once

#include <span>
#include <vector>

#include "zeno/params.hpp"
#include "zeno/pfunc_track.hpp"

namespace zeno {

// Baseline without measurements: the particle and field evolve unitarily for time t_bar.
// `couplings.tau_bar` is ignored throughout; t_bar = 0 is allowed.

/// Probability that the probe is still found in its initial Gaussian state at t_bar.
double free_survival(const SystemParams& couplings, const PFunction& pfunc, double t_bar,
                     const QuadratureOptions& opts = {});

/// Reduced field state: rows (alpha + p_bar g_bar (1 - e^{i t_bar})) e^{-i t_bar}, p_bar ~ Normal(0, dp_bar^2).
/// Row labels are coherent (xi = 0); normalization is exactly 1.
FieldEnsemble free_field_ensemble(const SystemParams& couplings, const PFunction& pfunc, double t_bar,
                                  int p_quad_order = 64, const QuadratureOptions& opts = {});

/// integral Pi(alpha) (|alpha|^2 + dp_bar^2 |g_bar (1 - e^{i t_bar})|^2).
double free_mean_quanta(const SystemParams& couplings, const PFunction& pfunc, double t_bar,
                        const QuadratureOptions& opts = {});

/// |alpha0|^2 + 4 g_bar^2 dp_bar^2 sin^2(t_bar / 2).
double free_mean_quanta_coherent(const SystemParams& couplings, cplx alpha0, double t_bar);

struct FreeRecord {
  double t_bar = 0.0;
  double survival = 1.0;
  double mean_quanta = 0.0;
};

std::vector<FreeRecord> free_series(const SystemParams& couplings, const PFunction& pfunc,
                                    std::span<const double> t_grid, const QuadratureOptions& opts = {});

}  // namespace zeno
