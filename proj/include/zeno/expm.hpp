#pragma once

#include <Eigen/Dense>

namespace zeno {

/// Dense matrix exponential by scaling and squaring with a diagonal Pade approximant
/// of degree 3, 5, 7, 9 or 13, picked from the 1-norm (Higham 2005 thresholds).
Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a);

}  // namespace zeno
