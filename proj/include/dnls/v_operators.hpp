#pragma once

#include "dnls/grid.hpp"
#include "dnls/transform.hpp"

namespace dnls {

// V(t) and V^{-1}(t): the operators linking w to the spatial profile,
//   [V(t) psi](x)  = int sqrt(it/2pi) e^{-it(x^2+s^2)/2} K(tx, s) psi(s) ds,
// and its inverse (adjoint kernel).  Fields are sampled on a symmetric grid;
// the abscissa plays the role of x for V output / xi for V^{-1} output.
enum class VMode { FastComposition, KernelOracle, Approximant };

struct VApplication {
  double t = 1.0;
  VMode mode = VMode::FastComposition;
  const DistortedTransformPlan* plan = nullptr;

  static VApplication make(double t, VMode mode, const DistortedTransformPlan& plan) {
    if (!(t > 0.0)) throw DomainError("V application needs t > 0");
    return VApplication{t, mode, &plan};
  }
  double q() const { return plan->q(); }
};

ComplexField apply_V(const VApplication& app, const ComplexField& psi);
ComplexField apply_Vinv(const VApplication& app, const ComplexField& phi);

// main terms of the large-t asymptotics:
//   approx_V    = T(|x|) psi + R(|x|) psi(-x) + 2 Fr(sqrt t |x|) psi(0)
//   approx_Vinv = conj(T)(|xi|) phi + conj(R)(|xi|) phi(-xi) + 2 conj(Fr)(sqrt t |xi|) phi(0)
ComplexField approx_V(const VApplication& app, const ComplexField& psi);
ComplexField approx_Vinv(const VApplication& app, const ComplexField& phi);

// measured homogeneous-Sobolev growth ratios:
//   V:     ||V psi||_{H1dot} / ||psi||_{H1}        (requires psi(0) = 0)
//   V^-1:  ||V^-1 phi||_{H1dot} / (sqrt t |phi(0)| + ||phi||_{H1})
double h1_growth_check_V(const VApplication& app, const ComplexField& psi);
double h1_growth_check_Vinv(const VApplication& app, const ComplexField& phi);

}  // namespace dnls
