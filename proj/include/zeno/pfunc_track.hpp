#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "zeno/iterates.hpp"
#include "zeno/params.hpp"
#include "zeno/squeezed.hpp"

namespace zeno {

// Initial field states described by a (nonsingular or delta-like) P-function
//   rho_F(0) = integral d^2 alpha  Pi(alpha) |alpha><alpha|.

struct DeltaP {
  cplx alpha0;
};

struct MixtureComponent {
  double weight = 0.0;
  cplx alpha;
};

/// Finite coherent mixture; weights must be positive and sum to 1.
struct CoherentMixtureP {
  std::vector<MixtureComponent> components;
};

/// Displaced thermal state: Pi(alpha) = exp(-|alpha - center|^2 / nbar) / (pi nbar).
struct ThermalP {
  double nbar = 0.0;
  cplx center;
};

using PFunction = std::variant<DeltaP, CoherentMixtureP, ThermalP>;

/// Throws InvalidParams on non-positive weights, weights not summing to 1 (1e-12), or nbar <= 0.
void validate(const PFunction& pfunc);

struct QuadratureOptions {
  int order = 32;  // Gauss-Hermite nodes per axis
  bool convergence_gate = true;
  double tolerance = 1e-8;  // relative change of P under order doubling
};

/// A weighted point in phase space of the initial P-function (quadrature node or mixture component).
struct PhasePoint {
  double weight = 0.0;
  cplx alpha;
};

/// Delta -> one point; mixture -> its components; thermal -> tensor Gauss-Hermite nodes.
std::vector<PhasePoint> phase_points(const PFunction& pfunc, int order);

struct EnsembleRow {
  double weight = 0.0;  // probability weight; rows sum to 1
  SqueezedCoherentLabel label;
};

/// rho_F(N tau) as a mixture of squeezed coherent states.
struct FieldEnsemble {
  std::vector<EnsembleRow> rows;
  double log_normalization = 0.0;  // ln P(N tau)

  double normalization() const;
};

/// Throws QuadratureNotConverged when the thermal integrand does not decay or the
/// order-doubling gate fails.
FieldEnsemble evolve_ensemble(const ProjectedKernel& kernel, const PFunction& pfunc, std::int64_t n,
                              const QuadratureOptions& opts = {});

double ensemble_mean_quanta(const FieldEnsemble& ensemble, const StepClosure& closure);

double ensemble_fidelity(const FieldEnsemble& ensemble, const TargetSqueeze& target, const StepClosure& closure);

}  // namespace zeno
