#pragma once

#include <Eigen/Dense>
#include <complex>
#include <numbers>

#include "dnls/errors.hpp"

namespace dnls {

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

// Uniform symmetric grid on [-L, L) with x = 0 on-node (N even), plus its
// FFT-ordered dual grid xi_m = (pi/L) m, m = -N/2 .. N/2-1.
struct GridSpec {
  double L = 0.0;
  Eigen::Index N = 0;

  static GridSpec make(double L, Eigen::Index N) {
    if (!(L > 0.0)) throw DomainError("grid half-length must be positive");
    if (N < 8 || N % 2 != 0) throw DomainError("grid size must be even and >= 8");
    return GridSpec{L, N};
  }

  double dx() const { return 2.0 * L / static_cast<double>(N); }
  double dxi() const { return kPi / L; }
  double xi_max() const { return kPi / dx(); }
  Eigen::Index origin() const { return N / 2; }

  // signed mode number of FFT bin j
  Eigen::Index mode(Eigen::Index j) const { return j < N / 2 ? j : j - N; }
  double x(Eigen::Index k) const { return -L + dx() * static_cast<double>(k); }
  double xi(Eigen::Index j) const { return dxi() * static_cast<double>(mode(j)); }

  RVec x_nodes() const {
    RVec out(N);
    for (Eigen::Index k = 0; k < N; ++k) out[k] = x(k);
    return out;
  }
  RVec xi_nodes() const {
    RVec out(N);
    for (Eigen::Index j = 0; j < N; ++j) out[j] = xi(j);
    return out;
  }

  bool operator==(const GridSpec& o) const { return L == o.L && N == o.N; }
  bool operator!=(const GridSpec& o) const { return !(*this == o); }
};

enum class Space { Position, Frequency };

// Complex samples on a GridSpec; position fields are indexed by x_k,
// frequency fields by FFT-ordered xi_m.
struct ComplexField {
  GridSpec grid;
  Space space = Space::Position;
  CVec v;

  static ComplexField zero(const GridSpec& g, Space s) {
    return ComplexField{g, s, CVec::Zero(g.N)};
  }
};

enum class Norm { L2, Linf, H1dot, H1, Sigma };

// plain DFT pair matching numpy's fft/ifft conventions
CVec fft(const CVec& in);
CVec ifft(const CVec& in);

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where);
void require_finite(const CVec& v, const char* where);

ComplexField reflect(const ComplexField& f);
double norm(const ComplexField& f, Norm which);
Complex value_at_zero(const ComplexField& f);
ComplexField resample(const ComplexField& f, const GridSpec& target);

// d/dx via the standard FFT of the grid (Nyquist mode dropped)
ComplexField spectral_derivative(const ComplexField& f);

// largest boundary-node magnitude relative to the sup norm
double boundary_fraction(const ComplexField& f);
void require_boundary_decay(const ComplexField& f, double tol, const char* where);

// samples of the band-limited interpolant at arbitrary points (periodic wrap)
CVec interpolate(const ComplexField& f, const RVec& points);

}  // namespace dnls
