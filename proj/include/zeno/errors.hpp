#pragma once

#include <stdexcept>
#include <string>

namespace zeno {

/// Base class for every domain failure raised by the library.
class ZenoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParams : public ZenoError {
 public:
  using ZenoError::ZenoError;
};

/// G = 0: the squeeze strength vanishes and q_tilde (which divides by G) is undefined.
class DegenerateKernel : public ZenoError {
 public:
  using ZenoError::ZenoError;
};

/// |lambda| = 1: no eigenvalue gap, repeated measurement does not distill.
class MarginalKernel : public ZenoError {
 public:
  using ZenoError::ZenoError;
};

class QuadratureNotConverged : public ZenoError {
 public:
  using ZenoError::ZenoError;
};

class TruncationTooSmall : public ZenoError {
 public:
  using ZenoError::ZenoError;
};

class GapTooSmall : public ZenoError {
 public:
  using ZenoError::ZenoError;
};

}  // namespace zeno
