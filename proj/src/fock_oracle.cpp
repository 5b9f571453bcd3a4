#include "zeno/fock_oracle.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "zeno/errors.hpp"
#include "zeno/expm.hpp"
#include "zeno/iterates.hpp"
#include "zeno/parallel.hpp"
#include "zeno/quadrature.hpp"

namespace zeno {

namespace {

constexpr double kHalfPi = 1.57079632679489661923;

void check_dim(int dim, const char* what) {
  if (dim < 2) throw InvalidParams(std::string(what) + ": dimension must be >= 2, got " + std::to_string(dim));
}

// Largest weight any of the first `cols` columns places in the top `guard` rows.
double column_leak(const FockMatrix& u, int cols, int guard) {
  return u.bottomRows(guard).leftCols(cols).cwiseAbs2().colwise().sum().maxCoeff();
}

// Working dimension large enough that number states up to `dim` displaced by `shift`
// stay inside, plus the guard band.
int displaced_start_dim(int dim, double shift, const TruncationPolicy& pol) {
  const double edge = std::sqrt(static_cast<double>(dim)) + shift;
  const double est = edge * edge + 8.0 * std::cbrt(edge * edge);
  return std::max(dim + pol.guard, static_cast<int>(std::ceil(est)) + pol.guard);
}

int grow(int dw) { return static_cast<int>(std::ceil(1.25 * dw)) + 1; }

[[noreturn]] void too_small(const char* what, int dw, double leak, const TruncationPolicy& pol) {
  std::ostringstream os;
  os << what << ": working basis reached " << dw << " levels (limit " << pol.max_working_dim
     << ") with leakage " << leak << " > " << pol.leak_tol;
  throw TruncationTooSmall(os.str());
}

// Runs build(dw) with a growing working dimension until the first `cols` columns are contained.
template <class Build>
FockMatrix contained_block(int rows, int cols, int start_dim, const TruncationPolicy& pol, const char* what,
                           Build&& build) {
  int dw = std::max(start_dim, std::max(rows, cols) + pol.guard);
  dw = std::min(dw, std::max(pol.max_working_dim, std::max(rows, cols) + pol.guard));
  for (;;) {
    const FockMatrix u = build(dw);
    const double leak = column_leak(u, cols, pol.guard);
    if (leak <= pol.leak_tol) return u.topLeftCorner(rows, cols);
    if (dw >= pol.max_working_dim) too_small(what, dw, leak, pol);
    dw = std::min(grow(dw), pol.max_working_dim);
  }
}

// Eigendecomposition of the truncated quadrature X = a + a^dag in `dw` levels, so that
// D(s e^{i theta}) = R Q diag(e^{-i s x}) Q^T R^dag with R = e^{i (theta + pi/2) a^dag a}.
struct QuadratureBasis {
  int dw = 0;
  Eigen::VectorXd x;
  FockMatrix q;  // eigenvectors, stored complex for the products below

  explicit QuadratureBasis(int working_dim) : dw(working_dim) {
    Eigen::MatrixXd xm = Eigen::MatrixXd::Zero(dw, dw);
    for (int n = 1; n < dw; ++n) xm(n - 1, n) = xm(n, n - 1) = std::sqrt(static_cast<double>(n));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(xm);
    x = es.eigenvalues();
    q = es.eigenvectors().cast<cplx>();
  }

  // Rows [row0, row0 + rows) and columns [0, cols) of D(beta).
  FockMatrix block(cplx beta, int row0, int rows, int cols) const {
    const double s = std::abs(beta);
    const double theta = (s > 0.0 ? std::arg(beta) : 0.0) + kHalfPi;
    Eigen::VectorXcd phase(dw);
    for (int k = 0; k < dw; ++k) phase(k) = std::polar(1.0, -s * x(k));
    const FockMatrix right = phase.asDiagonal() * q.topRows(cols).transpose();
    FockMatrix out = q.middleRows(row0, rows) * right;
    for (int n = 0; n < cols; ++n)
      for (int m = 0; m < rows; ++m) out(m, n) *= std::polar(1.0, theta * static_cast<double>(row0 + m - n));
    return out;
  }

  double leak(cplx beta, int cols, int guard) const {
    return block(beta, dw - guard, guard, cols).cwiseAbs2().colwise().sum().maxCoeff();
  }
};

FockMatrix displacement_columns(cplx alpha, int rows, int cols, const TruncationPolicy& pol) {
  int dw = displaced_start_dim(std::max(rows, cols), std::abs(alpha), pol);
  dw = std::min(dw, pol.max_working_dim);
  for (;;) {
    const QuadratureBasis basis(dw);
    const double leak = basis.leak(alpha, cols, pol.guard);
    if (leak <= pol.leak_tol) return basis.block(alpha, 0, rows, cols);
    if (dw >= pol.max_working_dim) too_small("displacement_matrix", dw, leak, pol);
    dw = std::min(grow(dw), pol.max_working_dim);
  }
}

FockMatrix squeeze_working(cplx xi, int dw) {
  const LadderPair l = ladder_matrices(dw);
  const FockMatrix a2 = l.a * l.a;
  const FockMatrix ad2 = l.a_dag * l.a_dag;
  return expm(0.5 * (std::conj(xi) * a2 - xi * ad2));
}

int squeeze_start_dim(int cols, double r, const TruncationPolicy& pol) {
  return static_cast<int>(std::ceil(cols * std::exp(2.0 * r))) + 4 * pol.guard + 20;
}

double free_phase(const SystemParams& params, double p_bar, double t_bar) {
  const double g2 = params.g_bar * params.g_bar;
  return -0.5 * p_bar * p_bar * t_bar * (1.0 - 2.0 * g2 * detail::one_minus_sinc(t_bar));
}

cplx displacement_per_momentum(const SystemParams& params, double t_bar) {
  return params.g_bar * (1.0 - std::polar(1.0, t_bar));
}

}  // namespace

LadderPair ladder_matrices(int dim) {
  check_dim(dim, "ladder_matrices");
  FockMatrix a = FockMatrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return {a, a.adjoint()};
}

FockMatrix displacement_matrix(cplx alpha, int dim, const TruncationPolicy& policy) {
  check_dim(dim, "displacement_matrix");
  return displacement_columns(alpha, dim, dim, policy);
}

FockMatrix squeeze_matrix(cplx xi, int dim, const TruncationPolicy& policy) {
  check_dim(dim, "squeeze_matrix");
  return contained_block(dim, dim, squeeze_start_dim(dim, std::abs(xi), policy), policy, "squeeze_matrix",
                         [xi](int dw) { return squeeze_working(xi, dw); });
}

FockVector coherent_vector(cplx alpha, int dim, const TruncationPolicy& policy) {
  check_dim(dim, "coherent_vector");
  return displacement_columns(alpha, dim, 1, policy).col(0);
}

FockVector squeezed_vacuum_vector(cplx xi, int dim, const TruncationPolicy& policy) {
  check_dim(dim, "squeezed_vacuum_vector");
  return contained_block(dim, 1, dim + 2 * policy.guard, policy, "squeezed_vacuum_vector",
                         [xi](int dw) { return FockMatrix(squeeze_working(xi, dw).col(0)); })
      .col(0);
}

double tail_weight(const FockVector& v, int guard) {
  const int g = std::min<int>(guard, static_cast<int>(v.size()));
  return v.tail(g).squaredNorm();
}

FockMatrix u_p_factored(const SystemParams& params, double p_bar, double t_bar, int dim,
                        const TruncationPolicy& policy) {
  check_dim(dim, "u_p_factored");
  const cplx scalar = std::polar(1.0, free_phase(params, p_bar, t_bar));
  FockMatrix u = displacement_matrix(p_bar * displacement_per_momentum(params, t_bar), dim, policy);
  for (int m = 0; m < dim; ++m) u.row(m) *= scalar * std::polar(1.0, -t_bar * (m + 0.5));
  return u;
}

FockMatrix u_p_exact(const SystemParams& params, double p_bar, double t_bar, int dim,
                     const TruncationPolicy& policy) {
  check_dim(dim, "u_p_exact");
  const double reach = params.g_bar * std::abs(p_bar) * 2.0 * std::sin(0.5 * std::min(std::abs(t_bar), M_PI));
  const double coupling = params.g_bar * p_bar;
  return contained_block(dim, dim, displaced_start_dim(dim, reach, policy), policy, "u_p_exact", [&](int dw) {
    FockMatrix h = FockMatrix::Zero(dw, dw);
    for (int n = 0; n < dw; ++n) h(n, n) = 0.5 * p_bar * p_bar + n + 0.5;
    for (int n = 1; n < dw; ++n) h(n - 1, n) = h(n, n - 1) = coupling * std::sqrt(static_cast<double>(n));
    return expm(cplx(0.0, -t_bar) * h);
  });
}

namespace {

struct Node {
  double weight;
  double p;
};

FockMatrix assemble_v(const SystemParams& params, int dim, int order, const VOptions& opts) {
  const GaussRule rule = normal_expectation_rule(order, params.dp_bar);
  const double cutoff = opts.node_cutoff;
  std::vector<Node> nodes;
  for (std::size_t i = 0; i < rule.size(); ++i)
    if (rule.weights[i] >= cutoff) nodes.push_back({rule.weights[i], rule.nodes[i]});

  const double t = params.tau_bar;
  const cplx per_p = displacement_per_momentum(params, t);
  double reach = 0.0;
  for (const auto& nd : nodes) reach = std::max(reach, std::abs(nd.p * per_p));

  const TruncationPolicy& pol = opts.truncation;
  int dw = std::min(displaced_start_dim(dim, reach, pol), pol.max_working_dim);
  for (;;) {
    const QuadratureBasis basis(dw);
    std::vector<double> leaks(nodes.size());
    std::vector<FockMatrix> terms(nodes.size());
    parallel_for_index(nodes.size(), opts.threads, [&](std::size_t k) {
      const cplx beta = nodes[k].p * per_p;
      leaks[k] = basis.leak(beta, dim, pol.guard);
      terms[k] = basis.block(beta, 0, dim, dim);
    });
    const double leak = *std::max_element(leaks.begin(), leaks.end());
    if (leak <= pol.leak_tol) {
      FockMatrix v = FockMatrix::Zero(dim, dim);
      for (std::size_t k = 0; k < nodes.size(); ++k)
        v += (nodes[k].weight * std::polar(1.0, free_phase(params, nodes[k].p, t))) * terms[k];
      for (int m = 0; m < dim; ++m) v.row(m) *= std::polar(1.0, -t * (m + 0.5));
      return v;
    }
    if (dw >= pol.max_working_dim) too_small("projected_v_matrix", dw, leak, pol);
    dw = std::min(grow(dw), pol.max_working_dim);
  }
}

}  // namespace

FockMatrix projected_v_matrix(const SystemParams& params, int dim, const VOptions& opts) {
  params.validate();
  check_dim(dim, "projected_v_matrix");
  if (opts.quad_order < 1) throw InvalidParams("projected_v_matrix: quadrature order must be >= 1");
  FockMatrix v = assemble_v(params, dim, opts.quad_order, opts);
  if (opts.convergence_gate) {
    const FockMatrix fine = assemble_v(params, dim, 2 * opts.quad_order, opts);
    const int block = opts.gate_block > 0 ? std::min(opts.gate_block, dim) : std::max(1, dim / 2);
    const double change = (fine - v).topLeftCorner(block, block).cwiseAbs().maxCoeff();
    if (!(change <= opts.gate_tol)) {
      std::ostringstream os;
      os << "projected_v_matrix: quadrature order " << opts.quad_order << " -> " << 2 * opts.quad_order
         << " changed V by " << change << " on the leading " << block << " levels (tolerance " << opts.gate_tol
         << ")";
      throw QuadratureNotConverged(os.str());
    }
  }
  return v;
}

FockMatrix closed_form_power(const ProjectedKernel& kernel, std::int64_t n_steps, int dim) {
  check_dim(dim, "closed_form_power");
  const StepClosure c = step_closure(kernel, n_steps);
  // lower(m, j) = <m| e^{-zeta a^2dag / 2} |j>, nonzero for m = j + 2k.
  FockMatrix lower = FockMatrix::Zero(dim, dim);
  const cplx half_zeta = -0.5 * c.zeta_N;
  for (int j = 0; j < dim; ++j) {
    cplx term = 1.0;
    lower(j, j) = term;
    for (int k = 1; j + 2 * k < dim; ++k) {
      const int m = j + 2 * k;
      term *= half_zeta / static_cast<double>(k) * std::sqrt(static_cast<double>(m) * (m - 1));
      lower(m, j) = term;
    }
  }
  Eigen::VectorXcd diag(dim);
  for (int j = 0; j < dim; ++j) diag(j) = std::exp(c.log_prefactor - c.kappa_N * (j + 0.5));
  return lower * diag.asDiagonal() * lower.transpose();
}

FockMatrix pure_density(const FockVector& v) { return v * v.adjoint(); }

FockMatrix thermal_density(double nbar, cplx center, int dim, const TruncationPolicy& policy) {
  check_dim(dim, "thermal_density");
  if (!(nbar > 0.0)) throw InvalidParams("thermal_density: nbar must be > 0");
  Eigen::VectorXcd p(dim);
  const double ratio = nbar / (1.0 + nbar);
  for (int n = 0; n < dim; ++n) p(n) = std::pow(ratio, n) / (1.0 + nbar);
  FockMatrix rho = p.asDiagonal();
  if (center == cplx(0.0, 0.0)) return rho;
  const FockMatrix d = displacement_matrix(center, dim, policy);
  return d * rho * d.adjoint();
}

std::vector<OracleObservables> oracle_trajectory(const FockMatrix& v, const FockMatrix& rho0, int n_max,
                                                 const FockVector& target, const OracleOptions& opts) {
  const Eigen::Index dim = v.rows();
  if (v.cols() != dim || rho0.rows() != dim || rho0.cols() != dim || target.size() != dim)
    throw InvalidParams("oracle_trajectory: dimension mismatch");
  if (n_max < 0) throw InvalidParams("oracle_trajectory: n_max must be >= 0");
  const int guard = static_cast<int>(std::min<Eigen::Index>(opts.guard, dim));
  const FockVector xi = target / target.norm();

  auto observe = [&](const FockMatrix& rho, double prob, int step) {
    const double tr = rho.trace().real();
    const double leak = rho.diagonal().tail(guard).real().sum() / tr;
    if (leak > opts.leak_tol) {
      std::ostringstream os;
      os << "oracle_trajectory: " << leak << " of the norm sits in the top " << guard << " of " << dim
         << " levels at N = " << step << " (limit " << opts.leak_tol << ")";
      throw TruncationTooSmall(os.str());
    }
    OracleObservables o;
    o.probability = prob;
    o.fidelity = (xi.adjoint() * rho * xi)(0, 0).real() / tr;
    double nq = 0.0;
    for (Eigen::Index n = 0; n < dim; ++n) nq += static_cast<double>(n) * rho(n, n).real();
    o.mean_quanta = nq / tr;
    return o;
  };

  std::vector<OracleObservables> out;
  out.reserve(static_cast<std::size_t>(n_max) + 1);
  FockMatrix rho = rho0 / rho0.trace().real();
  double prob = 1.0;
  out.push_back(observe(rho, prob, 0));
  for (int step = 1; step <= n_max; ++step) {
    FockMatrix next = v * rho * v.adjoint();
    next = 0.5 * (next + next.adjoint()).eval();
    const double tr = next.trace().real();
    prob *= tr;
    rho = next / tr;
    out.push_back(observe(rho, prob, step));
  }
  return out;
}

OracleObservables oracle_observables(const FockMatrix& v, const FockMatrix& rho0, int n_steps,
                                     const FockVector& target, const OracleOptions& opts) {
  return oracle_trajectory(v, rho0, n_steps, target, opts).back();
}

DominantMode dominant_mode(const FockMatrix& v, double min_gap) {
  if (v.rows() < 2 || v.rows() != v.cols()) throw InvalidParams("dominant_mode: need a square matrix of size >= 2");
  Eigen::ComplexEigenSolver<FockMatrix> es(v, true);
  if (es.info() != Eigen::Success) throw GapTooSmall("dominant_mode: eigen-solver did not converge");
  const Eigen::VectorXcd& ev = es.eigenvalues();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(ev.size()));
  for (Eigen::Index i = 0; i < ev.size(); ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return std::abs(ev(a)) > std::abs(ev(b)); });

  DominantMode mode;
  mode.eigenvalue = ev(order[0]);
  mode.second = ev(order[1]);
  mode.gap = std::abs(mode.eigenvalue) - std::abs(mode.second);
  if (!(mode.gap >= min_gap)) {
    std::ostringstream os;
    os << "dominant_mode: |mu1| - |mu2| = " << mode.gap << " < " << min_gap;
    throw GapTooSmall(os.str());
  }
  FockVector vec = es.eigenvectors().col(order[0]);
  Eigen::Index big = 0;
  vec.cwiseAbs().maxCoeff(&big);
  vec *= std::polar(1.0, -std::arg(vec(big))) / vec.norm();
  mode.vector = vec;
  return mode;
}

double interior_norm(const FockMatrix& m, int block) {
  const Eigen::Index b = std::min<Eigen::Index>(block, std::min(m.rows(), m.cols()));
  Eigen::JacobiSVD<FockMatrix> svd(m.topLeftCorner(b, b));
  return svd.singularValues()(0);
}

}  // namespace zeno
