#include "dnls/grid.hpp"

#define EIGEN_FFTW_DEFAULT
#include <unsupported/Eigen/FFT>

#include <cmath>

namespace dnls {

namespace {
Eigen::FFT<double>& fft_engine() {
  thread_local Eigen::FFT<double> engine;
  return engine;
}
}  // namespace

CVec fft(const CVec& in) {
  CVec out(in.size());
  fft_engine().fwd(out.data(), in.data(), static_cast<int>(in.size()));
  return out;
}

CVec ifft(const CVec& in) {
  CVec out(in.size());
  fft_engine().inv(out.data(), in.data(), static_cast<int>(in.size()));
  return out;
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where) {
  if (a != b) throw GridMismatch(where);
}

void require_finite(const CVec& v, const char* where) {
  if (!v.allFinite()) throw NonFiniteSample(where);
}

ComplexField reflect(const ComplexField& f) {
  ComplexField out{f.grid, f.space, CVec(f.grid.N)};
  const Eigen::Index N = f.grid.N;
  out.v[0] = f.v[0];  // -L wraps to itself
  for (Eigen::Index k = 1; k < N; ++k) out.v[k] = f.v[N - k];
  return out;
}

namespace {
double weighted_l2(const CVec& v, double w) { return std::sqrt(v.squaredNorm() * w); }
}  // namespace

double norm(const ComplexField& f, Norm which) {
  require_finite(f.v, "norm");
  const double w = f.space == Space::Position ? f.grid.dx() : f.grid.dxi();
  switch (which) {
    case Norm::L2:
      return weighted_l2(f.v, w);
    case Norm::Linf:
      return f.v.cwiseAbs().maxCoeff();
    case Norm::H1dot:
      return weighted_l2(spectral_derivative(f).v, w);
    case Norm::H1: {
      const double a = norm(f, Norm::L2), b = norm(f, Norm::H1dot);
      return std::sqrt(a * a + b * b);
    }
    case Norm::Sigma: {
      if (f.space != Space::Position) throw DomainError("Sigma norm needs a position field");
      const double h1 = norm(f, Norm::H1);
      double xs = 0.0;
      for (Eigen::Index k = 0; k < f.grid.N; ++k) xs += std::norm(f.v[k]) * f.grid.x(k) * f.grid.x(k);
      return std::sqrt(h1 * h1 + xs * w);
    }
  }
  throw DomainError("unknown norm");
}

Complex value_at_zero(const ComplexField& f) {
  if (f.space != Space::Position) throw DomainError("value_at_zero needs a position field");
  return f.v[f.grid.origin()];
}

ComplexField spectral_derivative(const ComplexField& f) {
  CVec spec = fft(f.v);
  const Eigen::Index N = f.grid.N;
  // dual spacing of the field's own sample spacing: position fields are
  // differentiated in x (dual step dxi), frequency fields in xi (dual step dx)
  const double dual = f.space == Space::Position ? f.grid.dxi() : f.grid.dx();
  for (Eigen::Index j = 0; j < N; ++j) {
    spec[j] *= kI * (f.grid.mode(j) == -N / 2 ? 0.0 : dual * double(f.grid.mode(j)));
  }
  return ComplexField{f.grid, f.space, ifft(spec)};
}

double boundary_fraction(const ComplexField& f) {
  const double sup = f.v.cwiseAbs().maxCoeff();
  if (sup == 0.0) return 0.0;
  const Eigen::Index N = f.grid.N;
  double edge = std::abs(f.v[0]);
  edge = std::max(edge, std::abs(f.v[1]));
  edge = std::max(edge, std::abs(f.v[N - 1]));
  return edge / sup;
}

void require_boundary_decay(const ComplexField& f, double tol, const char* where) {
  const double frac = boundary_fraction(f);
  if (frac >= tol) {
    throw BoundaryMass(std::string(where) + ": edge fraction " + std::to_string(frac));
  }
}

CVec interpolate(const ComplexField& f, const RVec& points) {
  if (f.space != Space::Position) throw DomainError("interpolate needs a position field");
  const Eigen::Index N = f.grid.N;
  CVec spec = fft(f.v) / static_cast<double>(N);
  CVec out(points.size());
  for (Eigen::Index p = 0; p < points.size(); ++p) {
    // value = sum_m c_m e^{i m dxi (x + L)} with the Nyquist mode as a cosine
    const double theta = (points[p] + f.grid.L) / f.grid.dx() * 2.0 * kPi / static_cast<double>(N);
    const Complex rot = std::exp(kI * theta);
    Complex acc = spec[0];
    Complex fwd = rot, bwd = std::conj(rot);
    for (Eigen::Index m = 1; m < N / 2; ++m) {
      acc += spec[m] * fwd + spec[N - m] * bwd;
      fwd *= rot;
      bwd *= std::conj(rot);
    }
    acc += spec[N / 2] * 0.5 * (fwd + bwd);  // Nyquist as cosine
    out[p] = acc;
  }
  return out;
}

ComplexField resample(const ComplexField& f, const GridSpec& target) {
  if (f.space != Space::Position) throw DomainError("resample needs a position field");
  require_boundary_decay(f, 1e-8, "resample");
  if (target == f.grid) return f;
  RVec pts(target.N);
  for (Eigen::Index k = 0; k < target.N; ++k) {
    double x = target.x(k);
    // wrap into the source period [-L, L)
    const double period = 2.0 * f.grid.L;
    x = x - period * std::floor((x + f.grid.L) / period);
    pts[k] = x;
  }
  return ComplexField{target, Space::Position, interpolate(f, pts)};
}

}  // namespace dnls
