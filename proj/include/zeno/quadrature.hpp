#pragma once

#include <vector>

namespace zeno {

/// Nodes and weights with sum_i w_i f(x_i) ~ integral of e^{-x^2} f(x) dx.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

GaussRule gauss_hermite(int order);

/// Rule for E[f(X)] with X ~ Normal(0, sigma^2); weights sum to 1.
GaussRule normal_expectation_rule(int order, double sigma);

}  // namespace zeno
