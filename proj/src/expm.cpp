#include "zeno/expm.hpp"

#include <array>
#include <cmath>

namespace zeno {

namespace {

using Mat = Eigen::MatrixXcd;

constexpr std::array<double, 4> kB3 = {120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kB5 = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr std::array<double, 8> kB7 = {17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0};
constexpr std::array<double, 10> kB9 = {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
                                        2162160.0,     110880.0,     3960.0,       90.0,        1.0};
constexpr std::array<double, 14> kB13 = {64764752532480000.0,
                                         32382376266240000.0,
                                         7771770303897600.0,
                                         1187353796428800.0,
                                         129060195264000.0,
                                         10559470521600.0,
                                         670442572800.0,
                                         33522128640.0,
                                         1323241920.0,
                                         40840800.0,
                                         960960.0,
                                         16380.0,
                                         182.0,
                                         1.0};

// Odd/even parts for degree m <= 9: U = A * sum b[2k+1] A^{2k}, V = sum b[2k] A^{2k}.
template <std::size_t N>
void pade_low(const Mat& a, const std::array<double, N>& b, Mat& u, Mat& v) {
  const Eigen::Index n = a.rows();
  const Mat ident = Mat::Identity(n, n);
  const Mat a2 = a * a;
  Mat power = ident;
  Mat odd = b[1] * ident;
  v = b[0] * ident;
  for (std::size_t k = 2; k + 1 < N; k += 2) {
    power = power * a2;
    v += b[k] * power;
    odd += b[k + 1] * power;
  }
  u.noalias() = a * odd;
}

void pade13(const Mat& a, Mat& u, Mat& v) {
  const auto& b = kB13;
  const Eigen::Index n = a.rows();
  const Mat ident = Mat::Identity(n, n);
  const Mat a2 = a * a;
  const Mat a4 = a2 * a2;
  const Mat a6 = a4 * a2;
  Mat tmp = b[13] * a6 + b[11] * a4 + b[9] * a2;
  Mat inner = a6 * tmp;
  inner += b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident;
  u.noalias() = a * inner;
  tmp = b[12] * a6 + b[10] * a4 + b[8] * a2;
  v.noalias() = a6 * tmp;
  v += b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;
}

double one_norm(const Mat& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

}  // namespace

Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a) {
  const Eigen::Index n = a.rows();
  if (n == 0) return a;
  const double norm = one_norm(a);

  Mat u(n, n);
  Mat v(n, n);
  int squarings = 0;
  if (norm <= 1.495585217958292e-2) {
    pade_low(a, kB3, u, v);
  } else if (norm <= 2.539398330063230e-1) {
    pade_low(a, kB5, u, v);
  } else if (norm <= 9.504178996162932e-1) {
    pade_low(a, kB7, u, v);
  } else if (norm <= 2.097847961257068) {
    pade_low(a, kB9, u, v);
  } else {
    constexpr double theta13 = 5.371920351148152;
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / theta13))));
    pade13(a * std::ldexp(1.0, -squarings), u, v);
  }

  Mat result = (v - u).partialPivLu().solve(v + u);
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

}  // namespace zeno
