#pragma once

// Elementary kernels of the characteristic-function representations and
// their derivatives in rho. Each is entire in rho; small |rho*y| uses series.

#include "dpencil/core.hpp"

namespace dpencil {

struct KernelValue {
  cplx value{};
  cplx deriv{};

  KernelValue& operator+=(const KernelValue& o) {
    value += o.value;
    deriv += o.deriv;
    return *this;
  }
  friend KernelValue operator*(double s, const KernelValue& k) { return {s * k.value, s * k.deriv}; }
  friend KernelValue operator*(const KernelValue& k, double s) { return s * k; }
};

namespace kern {

inline constexpr double kSeries = 0.05;

/// sin(rho y)/rho
inline KernelValue sin1(cplx rho, double y, cplx c, cplx s) {
  const cplx z = rho * y;
  if (std::abs(z) < kSeries) {
    const cplx z2 = z * z;
    const cplx v = 1.0 + z2 * (-1.0 / 6 + z2 * (1.0 / 120 + z2 * (-1.0 / 5040 + z2 / 362880.0)));
    const cplx d = z * (-1.0 / 3 + z2 * (1.0 / 30 + z2 * (-1.0 / 840 + z2 / 45360.0)));
    return {y * v, y * y * d};
  }
  return {s / rho, (y * c - s / rho) / rho};
}

/// (cos(rho y) - 1)/rho^2
inline KernelValue cos2(cplx rho, double y, cplx c, cplx s) {
  const cplx z = rho * y;
  if (std::abs(z) < kSeries) {
    const cplx z2 = z * z;
    const cplx v = -0.5 + z2 * (1.0 / 24 + z2 * (-1.0 / 720 + z2 * (1.0 / 40320 - z2 / 3628800.0)));
    const cplx d = z * (1.0 / 12 + z2 * (-1.0 / 180 + z2 * (1.0 / 6720 - z2 / 453600.0)));
    return {y * y * v, y * y * y * d};
  }
  const cplx v = (c - 1.0) / (rho * rho);
  return {v, -y * s / (rho * rho) - 2.0 * v / rho};
}

/// (sin(rho y) - rho y)/rho^2
inline KernelValue sin2(cplx rho, double y, cplx c, cplx s) {
  const cplx z = rho * y;
  if (std::abs(z) < kSeries) {
    const cplx z2 = z * z;
    const cplx v = z * (-1.0 / 6 + z2 * (1.0 / 120 + z2 * (-1.0 / 5040 + z2 / 362880.0)));
    const cplx d = -1.0 / 6 + z2 * (1.0 / 40 + z2 * (-1.0 / 1008 + z2 / 51840.0));
    return {y * y * v, y * y * y * d};
  }
  const cplx v = (s - z) / (rho * rho);
  return {v, y * (c - 1.0) / (rho * rho) - 2.0 * v / rho};
}

/// (cos(rho y) - 1)/rho
inline KernelValue cos1(cplx rho, double y, cplx c, cplx s) {
  const cplx z = rho * y;
  if (std::abs(z) < kSeries) {
    const cplx z2 = z * z;
    const cplx v = z * (-0.5 + z2 * (1.0 / 24 + z2 * (-1.0 / 720 + z2 / 40320.0)));
    const cplx d = -0.5 + z2 * (1.0 / 8 + z2 * (-1.0 / 144 + z2 / 5760.0));
    return {y * v, y * y * d};
  }
  const cplx v = (c - 1.0) / rho;
  return {v, -y * s / rho - v / rho};
}

#define DPENCIL_KERNEL_WRAPPER(name)                                 \
  inline KernelValue name(cplx rho, double y) {                     \
    const cplx z = rho * y;                                         \
    return name(rho, y, std::cos(z), std::sin(z));                  \
  }
DPENCIL_KERNEL_WRAPPER(sin1)
DPENCIL_KERNEL_WRAPPER(cos2)
DPENCIL_KERNEL_WRAPPER(sin2)
DPENCIL_KERNEL_WRAPPER(cos1)
#undef DPENCIL_KERNEL_WRAPPER

}  // namespace kern
}  // namespace dpencil
