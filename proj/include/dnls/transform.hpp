#pragma once

#include <array>

#include "dnls/grid.hpp"
#include "dnls/scattering.hpp"

namespace dnls {

// Distorted Fourier transform of H = -1/2 d^2/dx^2 + q delta(x) and its
// inverse, computed as standard FFTs plus a reflection-weighted half-line
// transform with endpoint dealiasing.
//
// The forward direction internally zero-pads the position field by `pad`
// (default 4) and returns the spectrum on the correspondingly refined dual
// grid (`spectral_grid()`): same band edge, spacing dxi/pad.  The inverse
// consumes such a spectrum, completes the algebraic R-tail beyond the band
// edge with a fitted 3-term 1/(i s)^k model, and restricts back to the
// position grid.  The `*_raw` entry points are the unpadded quadratures on an
// arbitrary grid; the `*_oracle` variants evaluate the same quadrature rule
// as a dense O(N^2) sum against kernel_K for equivalence testing.
class DistortedTransformPlan {
 public:
  DistortedTransformPlan(const GridSpec& grid, double q, int pad = 4,
                         double band_edge_tol = 1e-8);

  const GridSpec& position_grid() const { return grid_; }
  const GridSpec& spectral_grid() const { return spectral_; }
  double q() const { return coeffs_.q; }
  int pad() const { return pad_; }
  const ScatteringCoeffs<double>& coeffs() const { return coeffs_; }

  // F_q phi sampled on spectral_grid(); phi must live on position_grid()
  ComplexField forward(const ComplexField& phi) const;
  // F_q^{-1} psi on position_grid(); psi must live on spectral_grid()
  ComplexField inverse(const ComplexField& psi) const;

  // unpadded quadratures on grid g (no tail completion)
  CVec forward_raw(const CVec& phi, const GridSpec& g) const;
  CVec inverse_raw(const CVec& psi, const GridSpec& g) const;

  // dense same-rule references, O(N^2)
  CVec forward_oracle(const CVec& phi, const GridSpec& g) const;
  CVec inverse_oracle(const CVec& psi, const GridSpec& g) const;

  // asymptotic tail coefficients c_k of the half-line integral,
  // psi(xi) ~ (2 pi)^{-1/2} conj(R)(|xi|) sum_k c_k / (i |xi|)^k; c_1 = 2 phi(0)
  std::array<Complex, 3> fit_tail(const CVec& psi, const GridSpec& g) const;

  // L2 mass of the fitted model beyond the band edge
  double tail_mass(const std::array<Complex, 3>& c, double xi_edge) const;

  // L2 norm of a spectrum including the off-band tail mass
  double spectral_l2(const ComplexField& psi) const;

  // relative L2 mass near the band edge after removing the fitted tail model
  double band_edge_fraction(const ComplexField& psi) const;

 private:
  GridSpec grid_;
  GridSpec spectral_;
  ScatteringCoeffs<double> coeffs_;
  int pad_;
  double band_edge_tol_;
};

}  // namespace dnls
