#include "zeno/quadrature.hpp"

#include <gsl/gsl_integration.h>

#include <cmath>
#include <memory>
#include <string>

#include "zeno/errors.hpp"

namespace zeno {

GaussRule gauss_hermite(int order) {
  if (order < 1) throw InvalidParams("gauss_hermite: order must be >= 1, got " + std::to_string(order));
  // weight (x - a)^alpha exp(-b (x - a)^2) with a = 0, b = 1, alpha = 0.
  std::unique_ptr<gsl_integration_fixed_workspace, decltype(&gsl_integration_fixed_free)> ws(
      gsl_integration_fixed_alloc(gsl_integration_fixed_hermite, static_cast<std::size_t>(order), 0.0, 1.0, 0.0,
                                  0.0),
      &gsl_integration_fixed_free);
  if (!ws) throw QuadratureNotConverged("gauss_hermite: GSL failed to build a rule of order " + std::to_string(order));

  const double* x = gsl_integration_fixed_nodes(ws.get());
  const double* w = gsl_integration_fixed_weights(ws.get());
  GaussRule rule;
  rule.nodes.assign(x, x + order);
  rule.weights.assign(w, w + order);
  return rule;
}

GaussRule normal_expectation_rule(int order, double sigma) {
  GaussRule rule = gauss_hermite(order);
  const double scale = std::sqrt(2.0) * sigma;
  const double inv_sqrt_pi = 1.0 / std::sqrt(M_PI);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    rule.nodes[i] *= scale;
    rule.weights[i] *= inv_sqrt_pi;
  }
  return rule;
}

}  // namespace zeno
