#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "zeno/params.hpp"

namespace zeno {

// Brute-force reference in a truncated number basis {|0>, ..., |D-1>}.
//
// Unitary building blocks (displacement, squeeze, U_p) are computed in a larger working
// basis and cropped to D x D. The working dimension grows until no returned column leaks
// more than `leak_tol` of its weight into the top `guard` levels of the working basis.

using FockMatrix = Eigen::MatrixXcd;
using FockVector = Eigen::VectorXcd;

struct TruncationPolicy {
  int guard = 10;
  double leak_tol = 1e-10;
  int max_working_dim = 1200;
};

struct LadderPair {
  FockMatrix a;
  FockMatrix a_dag;
};

LadderPair ladder_matrices(int dim);

/// D(alpha) = exp(alpha a^dag - alpha* a).
FockMatrix displacement_matrix(cplx alpha, int dim, const TruncationPolicy& policy = {});

/// S(xi) = exp[(xi* a^2 - xi a^2dag)/2].
FockMatrix squeeze_matrix(cplx xi, int dim, const TruncationPolicy& policy = {});

FockVector coherent_vector(cplx alpha, int dim, const TruncationPolicy& policy = {});
FockVector squeezed_vacuum_vector(cplx xi, int dim, const TruncationPolicy& policy = {});

/// Sum of |c_n|^2 over the top `guard` levels.
double tail_weight(const FockVector& v, int guard);

/// Fixed-momentum propagator from the factored form: free-particle phase, number rotation
/// e^{-i t (a^dag a + 1/2)} and displacement by p_bar g_bar (1 - e^{i t_bar}).
/// params.tau_bar is ignored; t_bar is the evolution time.
FockMatrix u_p_factored(const SystemParams& params, double p_bar, double t_bar, int dim,
                        const TruncationPolicy& policy = {});

/// exp(-i t_bar H_p) with H_p = p^2/2 + (a^dag a + 1/2) + g_bar p (a^dag + a), by dense expm.
FockMatrix u_p_exact(const SystemParams& params, double p_bar, double t_bar, int dim,
                     const TruncationPolicy& policy = {});

struct VOptions {
  int quad_order = 64;
  bool convergence_gate = true;
  double gate_tol = 1e-8;        // max entry change under order doubling, leading gate_block levels
  int gate_block = 0;            // 0 = dim / 2; high levels need far more nodes and carry no weight
  double node_cutoff = 1e-30;    // skip nodes with weight below this
  unsigned threads = 0;          // 0 = hardware concurrency
  TruncationPolicy truncation{};
};

/// <Phi_0| U(tau) |Phi_0> by Gauss-Hermite quadrature over the probe momentum.
FockMatrix projected_v_matrix(const SystemParams& params, int dim, const VOptions& opts = {});

/// <m| V^N |n> reconstructed from the closed-form factorization (no truncation error).
FockMatrix closed_form_power(const ProjectedKernel& kernel, std::int64_t n_steps, int dim);

FockMatrix pure_density(const FockVector& v);

/// Thermal state with mean occupation nbar, displaced by `center`.
FockMatrix thermal_density(double nbar, cplx center, int dim, const TruncationPolicy& policy = {});

struct OracleObservables {
  double probability = 1.0;
  double fidelity = 0.0;
  double mean_quanta = 0.0;
};

struct OracleOptions {
  int guard = 10;
  double leak_tol = 1e-8;  // allowed fraction of the trace in the top `guard` levels
};

/// Entries 0..n_max of rho <- V rho V^dag; entry N holds P(N tau), <target|rho_N|target>
/// and Tr(rho_N a^dag a) with rho_N normalized. Throws TruncationTooSmall on leakage.
std::vector<OracleObservables> oracle_trajectory(const FockMatrix& v, const FockMatrix& rho0, int n_max,
                                                 const FockVector& target, const OracleOptions& opts = {});

OracleObservables oracle_observables(const FockMatrix& v, const FockMatrix& rho0, int n_steps,
                                     const FockVector& target, const OracleOptions& opts = {});

struct DominantMode {
  cplx eigenvalue;
  cplx second;  // next eigenvalue by modulus
  double gap = 0.0;
  FockVector vector;  // unit norm, largest component real positive
};

/// Largest-modulus eigenpair. Throws GapTooSmall if |mu_1| - |mu_2| < min_gap.
DominantMode dominant_mode(const FockMatrix& v, double min_gap = 1e-10);

/// Operator 2-norm of the leading `block` x `block` corner.
double interior_norm(const FockMatrix& m, int block);

}  // namespace zeno
