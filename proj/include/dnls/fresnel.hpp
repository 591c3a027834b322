#pragma once

#include <complex>

#include "dnls/grid.hpp"

namespace dnls {

// Faddeeva function w(z) = e^{-z^2} erfc(-i z), all complex z.
Complex faddeeva_w(Complex z);

// erfc for complex argument
Complex cerfc(Complex z);

// real Fresnel integrals C(x) = int_0^x cos(pi t^2 / 2) dt, S(x) = likewise with sin
struct FresnelCS {
  double C;
  double S;
};
FresnelCS fresnel_cs(double x);

// int_R e^{-i x^2 / 2} dx = sqrt(2 pi / i) = sqrt(pi) (1 - i)
Complex gauss_constant();

// Fr(y) = sqrt(i / 2 pi) int_{-inf}^{-y} e^{-i x^2 / 2} dx = erfc(e^{i pi/4} y / sqrt 2) / 2
Complex fresnel_fr(double y);

// Fresnel evolution of exponential steps, used by the fast V-operator paths:
//   exp_step_fresnel(y, gam, tau) = int_0^inf e^{-gam s} (2 pi i tau)^{-1/2} e^{i (y-s)^2 / (2 tau)} ds
//   ramp_fresnel = same with an extra factor s in the integrand
Complex exp_step_fresnel(double y, double gamma, double tau);
Complex ramp_fresnel(double y, double gamma, double tau);

}  // namespace dnls
