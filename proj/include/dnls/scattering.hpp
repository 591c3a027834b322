#pragma once

#include <cmath>
#include <complex>
#include <utility>

#include "dnls/errors.hpp"

namespace dnls {

// Closed-form scattering data of H = -1/2 d^2/dx^2 + q delta(x), q > 0:
//   T(xi) = i xi / (i xi - q),  R(xi) = q / (i xi - q),  R = T - 1.
template <class Scalar = double>
struct ScatteringCoeffs {
  Scalar q;

  using C = std::complex<Scalar>;

  static ScatteringCoeffs make(Scalar q) {
    if (!(q > Scalar(0))) throw DomainError("coupling q must be positive (repulsive case)");
    return ScatteringCoeffs{q};
  }

  C transmission(Scalar xi) const {
    const C ixi(Scalar(0), xi);
    return ixi / (ixi - q);
  }

  C reflection(Scalar xi) const {
    const C ixi(Scalar(0), xi);
    return q / (ixi - q);
  }

  // S(x) = (S1, S2) = (T(|x|), R(|x|))
  std::pair<C, C> s_vector(Scalar x) const {
    const Scalar a = std::abs(x);
    return {transmission(a), reflection(a)};
  }

  enum class JostSign { Plus, Minus };

  // f_+(x,xi) = 1(x) e^{i x xi} + 1(-x) [ e^{i x xi} + R(xi) e^{-i x xi} ] / T(xi)... expanded:
  //   x > 0 : e^{i x xi}
  //   x < 0 : (1/T) e^{i x xi} + (R/T) e^{-i x xi}
  // continuous extension f_+(0, xi) = 1; f_-(x, xi) = f_+(-x, xi).
  C jost(JostSign sign, Scalar x, Scalar xi) const {
    if (sign == JostSign::Minus) return jost(JostSign::Plus, -x, xi);
    if (x == Scalar(0)) return C(Scalar(1), Scalar(0));
    if (xi == Scalar(0)) {
      // zero-energy limit of the formula: 1 on x > 0, 1 - 2 q x on x < 0
      return C(x > Scalar(0) ? Scalar(1) : Scalar(1) - Scalar(2) * q * x, Scalar(0));
    }
    const C phase = std::exp(C(Scalar(0), x * xi));
    if (x > Scalar(0)) return phase;
    const C t = transmission(xi), r = reflection(xi);
    return phase / t + (r / t) * std::conj(phase);
  }

  // K(x, xi): T(xi) f_+(x, xi) for xi > 0, K(-x, -xi) for xi < 0, 0 at xi = 0.
  // Expanded to avoid the removable T/T cancellation:
  //   xi > 0, x >= 0 : T(xi) e^{i x xi}
  //   xi > 0, x <  0 : e^{i x xi} + R(xi) e^{-i x xi}
  C kernel_K(Scalar x, Scalar xi) const {
    if (xi == Scalar(0)) return C(Scalar(0), Scalar(0));
    if (xi < Scalar(0)) return kernel_K(-x, -xi);
    const C phase = std::exp(C(Scalar(0), x * xi));
    if (x >= Scalar(0)) return transmission(xi) * phase;
    return phase + reflection(xi) * std::conj(phase);
  }
};

}  // namespace dnls
