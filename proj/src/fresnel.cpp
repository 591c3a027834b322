#include "dnls/fresnel.hpp"

#include <array>
#include <cmath>

namespace dnls {

namespace {

constexpr int kWeidemanM = 40;

struct WeidemanTable {
  double L;
  std::array<double, kWeidemanM> a;  // a[m-1] multiplies Z^{m-1}
};

// rational expansion coefficients for w(z) on the upper half-plane (Weideman's method):
// sample f(t) = e^{-t^2} (L^2 + t^2) at t = L tan(theta/2) and take the real DFT
WeidemanTable build_weideman() {
  WeidemanTable tab{};
  const int M = kWeidemanM, M2 = 2 * M;
  tab.L = std::sqrt(M / std::sqrt(2.0));
  std::array<double, 2 * kWeidemanM> f{};
  f[0] = 0.0;
  for (int idx = 1; idx < M2; ++idx) {
    const int k = idx - M;  // k = -M+1 .. M-1
    const double theta = k * kPi / M;
    const double t = tab.L * std::tan(0.5 * theta);
    f[idx] = std::exp(-t * t) * (tab.L * tab.L + t * t);
  }
  // g = fftshift(f); a_m = Re DFT(g)_m / (2M), m = 1..M
  for (int m = 1; m <= M; ++m) {
    double acc = 0.0;
    for (int l = 0; l < M2; ++l) {
      const double g = f[(l + M) % M2];
      acc += g * std::cos(2.0 * kPi * m * l / M2);
    }
    tab.a[m - 1] = acc / M2;
  }
  return tab;
}

const WeidemanTable& weideman() {
  static const WeidemanTable tab = build_weideman();
  return tab;
}

Complex faddeeva_upper(Complex z) {
  const auto& tab = weideman();
  const Complex iz = kI * z;
  const Complex Z = (tab.L + iz) / (tab.L - iz);
  Complex p(0.0, 0.0);
  for (int m = kWeidemanM; m >= 1; --m) p = p * Z + tab.a[m - 1];
  const Complex d = tab.L - iz;
  return 2.0 * p / (d * d) + (1.0 / std::sqrt(kPi)) / d;
}

}  // namespace

Complex faddeeva_w(Complex z) {
  if (z.imag() >= 0.0) return faddeeva_upper(z);
  return 2.0 * std::exp(-z * z) - faddeeva_upper(-z);
}

Complex cerfc(Complex z) { return std::exp(-z * z) * faddeeva_w(kI * z); }

FresnelCS fresnel_cs(double x) {
  // C(x) + i S(x) = (1+i)/2 erf(sqrt(pi)/2 (1-i) x)
  const Complex z = 0.5 * std::sqrt(kPi) * Complex(1.0, -1.0) * x;
  const Complex e = 1.0 - cerfc(z);
  const Complex cs = 0.5 * Complex(1.0, 1.0) * e;
  return FresnelCS{cs.real(), cs.imag()};
}

Complex gauss_constant() { return std::sqrt(kPi) * Complex(1.0, -1.0); }

Complex fresnel_fr(double y) {
  if (y < 0.0) throw DomainError("fresnel_fr needs y >= 0");
  const Complex a = std::exp(kI * kPi / 4.0) / std::sqrt(2.0);
  return 0.5 * cerfc(a * y);
}

Complex exp_step_fresnel(double y, double gamma, double tau) {
  const Complex al = -0.5 * kI / tau;
  const Complex sal = std::sqrt(al);
  const Complex mu = y - gamma / (2.0 * al);
  return 0.5 * std::exp(-gamma * y + gamma * gamma / (4.0 * al)) * cerfc(-sal * mu);
}

Complex ramp_fresnel(double y, double gamma, double tau) {
  const Complex al = -0.5 * kI / tau;
  const Complex sal = std::sqrt(al);
  const Complex mu = y - gamma / (2.0 * al);
  const Complex E = std::exp(-gamma * y + gamma * gamma / (4.0 * al));
  const Complex dE = E * (-y + gamma / (2.0 * al));
  const Complex z = sal * mu;
  const Complex derfc = -(2.0 / std::sqrt(kPi)) * std::exp(-z * z) * (sal / (2.0 * al));
  return -0.5 * (dE * cerfc(-z) + E * derfc);
}

}  // namespace dnls
