#pragma once

#include <utility>
#include <vector>

#include "dnls/grid.hpp"
#include "dnls/propagator.hpp"
#include "dnls/rate_fit.hpp"
#include "dnls/v_operators.hpp"

namespace dnls {

// Analysis of the long-time profile: the hermitian system for (w, w(-.)),
// its unitary diagonalizer, phase-corrected variables g_j, profile W
// extraction, and the residuals of the asymptotic theorem.
//
// Spectral fields here use the centered "profile" layout: a Position-space
// field on GridSpec{xi_max, N} whose node k holds the value at
// xi = -xi_max + k dxi_fine.

// FFT-ordered frequency field (as produced by to_w) -> centered profile field
ComplexField freq_to_profile(const ComplexField& w);
ComplexField profile_to_freq(const ComplexField& p, const GridSpec& freq_grid);

// per-node scattering matrix S = (S1, S2) = (T(|xi|), R(|xi|)) and the
// unitary B = [[S1, conj(S2)], [-S2, conj(S1)]]
struct SMatrixField {
  GridSpec grid;
  CVec s1, s2;
  static SMatrixField make(const GridSpec& grid, double q);
};

// nodewise hermitian matrix driving the w-system
struct AMatrixField {
  GridSpec grid;
  RVec a11, a22;
  CVec a12;  // a21 = conj(a12)
};

AMatrixField assemble_A(const SMatrixField& S, const ComplexField& w);

// f = B* (w, w(-.)) nodewise
std::pair<ComplexField, ComplexField> to_f(const SMatrixField& S, const ComplexField& w);

// g_j(t) = exp(i lambda int_1^t |f_j|^2 ds/s) f_j(t), trapezoid in log s
struct GSeries {
  GridSpec grid;
  std::vector<double> t;
  std::vector<CVec> g1, g2;
};

GSeries accumulate_g(const std::vector<Snapshot>& run, double lambda, double q);

struct ProfileResult {
  ComplexField W;          // on the profile grid
  double T = 0.0;          // extraction time
  double beta = 0.1;
  std::vector<double> times;
  std::vector<double> residual;  // r(t) = sup |V(t)w(t) - e^{-i lambda |W|^2 log t} W|
  RateFit fit;
};

ProfileResult extract_profile(const std::vector<Snapshot>& run, double lambda, double q,
                              double beta = 0.1, double interior_fraction = 0.8);

// residual of u(t,x) vs (it)^{-1/2} e^{i x^2/(2t)} W(x/t) e^{-i lambda |W(x/t)|^2 log t}
RateFit theorem_residual(const std::vector<Snapshot>& run, const ComplexField& W,
                         double lambda, double t_lo, double t_hi,
                         double interior_fraction = 0.8,
                         std::vector<double>* series = nullptr);

struct MonitorReport {
  double w_inf_ratio = 0.0;     // sup_t ||w||_inf / eps
  double w_h1_ratio = 0.0;      // sup_t <t>^{-beta} ||w||_H1 / eps
  double u_decay_ratio = 0.0;   // sup_t <t>^{1/2} ||u||_inf / eps
  double beta = 0.1;
};

MonitorReport bound_monitors(const std::vector<Snapshot>& run, double epsilon, double beta = 0.1);

// nonlinear term of the w-equation: V^{-1}(t)[ |V w|^2 V w ] on the profile grid
ComplexField nonlinear_term(const VApplication& app, const ComplexField& w_profile);

// relative L2 defect of the w-equation at the middle snapshot of a triple,
// via centered finite differences in t
double ode_residual(const Snapshot& before, const Snapshot& at, const Snapshot& after,
                    double lambda, double q, double interior_fraction = 0.8);

// right side of the nonlinear H1dot estimate, evaluated from a norms record
double nle2_bound(const NormsRecord& n, double t);

// band-limited samples of a profile field at arbitrary abscissae
// (FFT upsampling + local cubic), zero outside the grid
CVec sample_profile(const ComplexField& W, const RVec& points);

}  // namespace dnls
