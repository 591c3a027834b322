#include "dnls/v_operators.hpp"

#include <cmath>

#include "dnls/fresnel.hpp"
#include "dnls/scattering.hpp"

namespace dnls {

namespace {

// free Schroedinger half-step e^{-i tau xi^2 / 2} in the grid's own dual basis
CVec free_ev(const CVec& v, const GridSpec& g, double tau) {
  CVec spec = fft(v);
  for (Eigen::Index j = 0; j < g.N; ++j) {
    const double xi = g.dxi() * double(g.mode(j));
    spec[j] *= std::exp(-0.5 * kI * tau * xi * xi);
  }
  return ifft(spec);
}

// shared structure of the fast paths: evolve the origin-folded half-line array
// under the free flow, with the jump at s = 0 peeled off into closed-form
// Fresnel evolutions of J0 e^{-gam s} + J1 s e^{-gam s} to suppress ringing
struct FoldedEvolution {
  CVec evolved;        // free evolution of the smoothed fold, full grid
  Complex j0, j1;      // peeled step/ramp amplitudes
  double tau, gam;

  Complex at(const GridSpec& g, Eigen::Index idx) const {
    const double y = idx * g.dx();
    return evolved[idx] + j0 * exp_step_fresnel(y, gam, tau) + j1 * ramp_fresnel(y, gam, tau);
  }
};

FoldedEvolution evolve_fold(const CVec& chi, Complex chi0, const GridSpec& g, double tau) {
  const Eigen::Index N = g.N;
  const double dx = g.dx(), gam = 1.0;
  Complex f5[5];
  f5[0] = chi0;
  for (int i = 1; i < 5; ++i) f5[i] = chi[i];
  const Complex d1 =
      (-25.0 * f5[0] + 48.0 * f5[1] - 36.0 * f5[2] + 16.0 * f5[3] - 3.0 * f5[4]) / (12.0 * dx);
  const Complex j0 = chi0;
  const Complex j1 = d1 + gam * j0;
  CVec smooth = chi;
  smooth[0] = chi0;
  for (Eigen::Index j = 0; j < N / 2; ++j) {
    const double s = j * dx;
    smooth[j] -= (j0 + j1 * s) * std::exp(-gam * s);
  }
  smooth[0] *= 0.5;  // trapezoidal half-cell at the origin node
  return FoldedEvolution{free_ev(smooth, g, tau), j0, j1, tau, gam};
}

void check_grid(const VApplication& app, const ComplexField& f, const char* where) {
  if (f.space != Space::Position) throw DomainError(std::string(where) + ": field layout");
  if (app.plan == nullptr) throw DomainError(std::string(where) + ": unset plan");
  require_finite(f.v, where);
}

ComplexField fast_V(const VApplication& app, const ComplexField& psi) {
  const GridSpec& g = psi.grid;
  const Eigen::Index N = g.N;
  const double t = app.t, dx = g.dx();
  const ScatteringCoeffs<double> sc{app.q()};
  const double tau = -1.0 / t;

  CVec chi = CVec::Zero(N);
  for (Eigen::Index j = 1; j < N / 2; ++j)
    chi[j] = sc.reflection(j * dx) * (psi.v[N / 2 + j] + psi.v[N / 2 - j]);
  const Complex chi0 = sc.reflection(0.0) * 2.0 * psi.v[N / 2];
  const FoldedEvolution fe = evolve_fold(chi, chi0, g, tau);

  const CVec v0 = free_ev(psi.v, g, tau);
  CVec half(N / 2 + 1);
  for (Eigen::Index j = 0; j <= N / 2; ++j) half[j] = fe.at(g, j);
  CVec out(N);
  for (Eigen::Index k = 0; k < N; ++k) out[k] = v0[k] + half[std::abs(k - N / 2)];
  return ComplexField{g, Space::Position, std::move(out)};
}

ComplexField fast_Vinv(const VApplication& app, const ComplexField& phi) {
  const GridSpec& g = phi.grid;
  const Eigen::Index N = g.N;
  const double t = app.t, dx = g.dx();
  const ScatteringCoeffs<double> sc{app.q()};
  const double tau = 1.0 / t;

  CVec chi = CVec::Zero(N);
  for (Eigen::Index j = 1; j < N / 2; ++j) chi[j] = phi.v[N / 2 + j] + phi.v[N / 2 - j];
  const Complex chi0 = 2.0 * phi.v[N / 2];
  const FoldedEvolution fe = evolve_fold(chi, chi0, g, tau);

  const CVec v0 = free_ev(phi.v, g, tau);
  CVec half(N / 2 + 1);
  for (Eigen::Index j = 0; j <= N / 2; ++j) half[j] = fe.at(g, j);
  CVec out(N);
  for (Eigen::Index k = 0; k < N; ++k) {
    const Eigen::Index idx = std::abs(k - N / 2);
    out[k] = v0[k] + std::conj(sc.reflection(idx * dx)) * half[idx];
  }
  return ComplexField{g, Space::Position, std::move(out)};
}

// band-limited upsampling by zero padding the spectrum
CVec upsample(const CVec& v, Eigen::Index factor) {
  const Eigen::Index N = v.size(), Nf = N * factor;
  CVec spec = fft(v);
  CVec pad = CVec::Zero(Nf);
  pad.head(N / 2) = spec.head(N / 2);
  pad.tail(N / 2) = spec.tail(N / 2);
  return ifft(pad) * double(factor);
}

Eigen::Index oracle_factor(const GridSpec& g, double t) {
  // resolve the kernel phase: increment per fine cell below pi/4
  const double rate = t * 2.0 * g.L;  // max |d phase / ds| ~ t (|x| + |s|)
  Eigen::Index u = 1;
  while (rate * g.dx() / double(u) >= kPi / 4.0) {
    u *= 2;
    if (u > 4096) {
      throw OracleResolution("kernel quadrature cannot resolve the phase at t = " +
                             std::to_string(t));
    }
  }
  return u;
}

// dense kernel quadrature (composite Simpson over the folded half-line) for
// both directions; `inverse` selects the adjoint kernel
CVec oracle_apply(const VApplication& app, const ComplexField& fin, bool inverse) {
  const GridSpec& g = fin.grid;
  const Eigen::Index N = g.N;
  const double t = app.t;
  const ScatteringCoeffs<double> sc{app.q()};
  const Eigen::Index U = oracle_factor(g, t);
  const CVec fine = upsample(fin.v, U);
  const Eigen::Index Nf = N * U;
  const double h = g.dx() / double(U);

  // quadratic phase e^{-+ i t s^2 / 2} on the fine half-line
  const double psign = inverse ? +1.0 : -1.0;
  CVec ph(Nf / 2 + 1);
  for (Eigen::Index j = 0; j <= Nf / 2; ++j) {
    const double s = j * h;
    ph[j] = std::exp(psign * 0.5 * kI * t * s * s);
  }
  const Complex pref_base = std::sqrt(t / (2.0 * kPi)) * std::exp(kI * kPi / 4.0);
  const Complex pref = inverse ? std::conj(pref_base) : pref_base;

  CVec out(N);
  for (Eigen::Index k = 0; k < N; ++k) {
    const double xv = g.x(k);
    const double axi = std::abs(xv);
    const Complex Ti = std::conj(sc.transmission(axi));
    const Complex Ri = std::conj(sc.reflection(axi));
    const double theta = t * xv * h;  // E_j = e^{i t s_j xv}
    const Complex rot = std::exp(kI * theta);
    Complex E(1.0, 0.0);
    Complex acc(0, 0);
    for (Eigen::Index j = 0; j <= Nf / 2; ++j) {
      if (j % 512 == 0) E = std::exp(kI * (theta * double(j)));
      const Complex pp = fine[Nf / 2 + j >= Nf ? 0 : Nf / 2 + j];
      const Complex pm = fine[(Nf / 2 - j + Nf) % Nf];
      const Complex Eb = std::conj(E);
      Complex kp, km;  // kernel factors against f(+s) and f(-s)
      if (!inverse) {
        // K(t x, +-s) with E = e^{i t x s}
        const double s = j * h;
        const Complex Ts = sc.transmission(s), Rs = sc.reflection(s);
        if (xv >= 0.0) {
          kp = Ts * E;
          km = Eb + Rs * E;
        } else {
          kp = E + Rs * Eb;
          km = Ts * Eb;
        }
      } else {
        // conj(K(t s, xi)) / conj(K(-t s, xi)) with E = e^{i t s xi}
        if (xv >= 0.0) {
          kp = Ti * Eb;
          km = E + Ri * Eb;
        } else {
          kp = Eb + Ri * E;
          km = Ti * E;
        }
      }
      const double sw = (j == 0 || j == Nf / 2) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
      acc += sw * ph[j] * (kp * pp + km * pm);
      E *= rot;
    }
    acc *= h / 3.0;
    const Complex outer = std::exp(psign * 0.5 * kI * t * xv * xv);
    out[k] = pref * outer * acc;
  }
  return out;
}

}  // namespace

ComplexField apply_V(const VApplication& app, const ComplexField& psi) {
  check_grid(app, psi, "apply_V");
  switch (app.mode) {
    case VMode::FastComposition:
      return fast_V(app, psi);
    case VMode::KernelOracle:
      return ComplexField{psi.grid, Space::Position, oracle_apply(app, psi, false)};
    case VMode::Approximant:
      return approx_V(app, psi);
  }
  throw DomainError("apply_V: unknown mode");
}

ComplexField apply_Vinv(const VApplication& app, const ComplexField& phi) {
  check_grid(app, phi, "apply_Vinv");
  switch (app.mode) {
    case VMode::FastComposition:
      return fast_Vinv(app, phi);
    case VMode::KernelOracle:
      return ComplexField{phi.grid, Space::Position, oracle_apply(app, phi, true)};
    case VMode::Approximant:
      return approx_Vinv(app, phi);
  }
  throw DomainError("apply_Vinv: unknown mode");
}

ComplexField approx_V(const VApplication& app, const ComplexField& psi) {
  check_grid(app, psi, "approx_V");
  const GridSpec& g = psi.grid;
  const ScatteringCoeffs<double> sc{app.q()};
  const Complex at0 = psi.v[g.origin()];
  const double rt = std::sqrt(app.t);
  CVec out(g.N);
  for (Eigen::Index k = 0; k < g.N; ++k) {
    const double a = std::abs(g.x(k));
    const Complex mirror = psi.v[k == 0 ? 0 : g.N - k];
    out[k] = sc.transmission(a) * psi.v[k] + sc.reflection(a) * mirror +
             2.0 * fresnel_fr(rt * a) * at0;
  }
  return ComplexField{g, Space::Position, std::move(out)};
}

ComplexField approx_Vinv(const VApplication& app, const ComplexField& phi) {
  check_grid(app, phi, "approx_Vinv");
  const GridSpec& g = phi.grid;
  const ScatteringCoeffs<double> sc{app.q()};
  const Complex at0 = phi.v[g.origin()];
  const double rt = std::sqrt(app.t);
  CVec out(g.N);
  for (Eigen::Index k = 0; k < g.N; ++k) {
    const double a = std::abs(g.x(k));
    const Complex mirror = phi.v[k == 0 ? 0 : g.N - k];
    out[k] = std::conj(sc.transmission(a)) * phi.v[k] +
             std::conj(sc.reflection(a)) * mirror +
             2.0 * std::conj(fresnel_fr(rt * a)) * at0;
  }
  return ComplexField{g, Space::Position, std::move(out)};
}

double h1_growth_check_V(const VApplication& app, const ComplexField& psi) {
  const double den = norm(psi, Norm::H1);
  if (den == 0.0) return 0.0;
  if (std::abs(psi.v[psi.grid.origin()]) > 1e-10 * norm(psi, Norm::Linf)) {
    throw DomainError("h1_growth_check_V requires psi(0) = 0");
  }
  const ComplexField out = apply_V(app, psi);
  return norm(out, Norm::H1dot) / den;
}

double h1_growth_check_Vinv(const VApplication& app, const ComplexField& phi) {
  const double h1 = norm(phi, Norm::H1);
  if (h1 == 0.0) return 0.0;
  const double den = std::sqrt(app.t) * std::abs(phi.v[phi.grid.origin()]) + h1;
  const ComplexField out = apply_Vinv(app, phi);
  return norm(out, Norm::H1dot) / den;
}

}  // namespace dnls
