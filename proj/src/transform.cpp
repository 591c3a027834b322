#include "dnls/transform.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace dnls {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310002;

// ---- periodic-image sums for half-line trapezoid dealiasing -----------------
// S_p(omega) = sum_{n != 0} 1/(omega + 2 pi n / h)^p in closed cot/csc form,
// with series near z = h omega / 2 = 0.
struct SImages {
  double s1, s2, s3;
};

SImages s123(double om, double h) {
  const double z = 0.5 * h * om;
  if (std::abs(z) < 0.25) {
    const double z2 = z * z;
    const double zcot = -z2 / 3 - z2 * z2 / 45 - 2 * z2 * z2 * z2 / 945 -
                        z2 * z2 * z2 * z2 / 4725;           // z cot z - 1
    const double z2csc = z2 / 3 + z2 * z2 / 15 + 2 * z2 * z2 * z2 / 189;  // z^2/sin^2 z - 1
    const double z3cc = -z2 * z2 / 15;                      // z^3 cot z / sin^2 z - 1
    if (om == 0.0) return {0.0, h * h / 12.0, 0.0};
    return {zcot / om, z2csc / (om * om), z3cc / (om * om * om)};
  }
  const double sn = std::sin(z), cs = std::cos(z);
  const double s1 = 0.5 * h * cs / sn - 1.0 / om;
  const double s2 = 0.25 * h * h / (sn * sn) - 1.0 / (om * om);
  const double s3 = 0.125 * h * h * h * cs / (sn * sn * sn) - 1.0 / (om * om * om);
  return {s1, s2, s3};
}

double s4(double om, double h) {
  const double z = 0.5 * h * om;
  const double h4 = std::pow(0.5 * h, 4);
  if (std::abs(z) < 0.05) return h4 * (1.0 / 45.0 + 4.0 * z * z / 189.0);
  const double sn = std::sin(z), cs = std::cos(z);
  const double csc2 = 1.0 / (sn * sn), cot = cs / sn;
  return h4 * (2.0 * csc2 * cot * cot + csc2 * csc2) / 3.0 - 1.0 / std::pow(om, 4);
}

// aliasing error of the half-line trapezoid of e^{-i s omega} f(s), from the
// one-sided endpoint data (f(0), f'(0), f''(0), f'''(0))
Complex image_corr(Complex f0, Complex d1, Complex d2, Complex d3, double om, double h) {
  const SImages s = s123(om, h);
  Complex out = (-kI * f0) * s.s1 - d1 * s.s2 + (kI * d2) * s.s3;
  if (d3 != Complex(0.0, 0.0)) out += d3 * s4(om, h);
  return out;
}

// one-sided derivative weights for f^(p)(0) from 7 equispaced samples
struct Deriv7 {
  Eigen::Matrix<double, 3, 7> w;  // rows: orders 1..3 at unit spacing
};

const Deriv7& deriv7() {
  static const Deriv7 tab = [] {
    Eigen::Matrix<double, 7, 7> V;
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j) V(i, j) = std::pow(double(j), i);
    Deriv7 t;
    double fact = 1.0;
    for (int p = 1; p <= 3; ++p) {
      fact *= p;
      Eigen::Matrix<double, 7, 1> b = Eigen::Matrix<double, 7, 1>::Zero();
      b[p] = fact;
      t.w.row(p - 1) = V.fullPivLu().solve(b).transpose();
    }
    return t;
  }();
  return tab;
}

struct Derivs {
  Complex d1, d2, d3;
};

Derivs onesided3(const Complex* v, double h) {
  const auto& w = deriv7().w;
  Derivs d{{0, 0}, {0, 0}, {0, 0}};
  for (int j = 0; j < 7; ++j) {
    d.d1 += w(0, j) * v[j];
    d.d2 += w(1, j) * v[j];
    d.d3 += w(2, j) * v[j];
  }
  d.d1 /= h;
  d.d2 /= h * h;
  d.d3 /= h * h * h;
  return d;
}

// 5-point one-sided first/second derivatives (used by the forward correction)
std::pair<Complex, Complex> onesided2(const Complex* v, double h) {
  const Complex d1 =
      (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4]) / (12.0 * h);
  const Complex d2 =
      (35.0 * v[0] - 104.0 * v[1] + 114.0 * v[2] - 56.0 * v[3] + 11.0 * v[4]) / (12.0 * h * h);
  return {d1, d2};
}

// ---- oscillatory tail integrals I(a, m) = int_Xi^inf e^{i a s} s^{-m} ds ----

// E1(-i x) = int_x^inf e^{i u} / u du via modified Lentz continued fraction
Complex e1_neg_ix(double x) {
  const Complex z = -kI * x;
  const double tiny = 1e-300;
  Complex b = z + 1.0;
  Complex c = 1.0 / tiny;
  Complex d = 1.0 / b;
  Complex h = d;
  for (int i = 1; i < 200; ++i) {
    const double an = -double(i) * double(i);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const Complex delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-15) break;
  }
  return std::exp(-z) * h;
}

Complex tail_integral(double a, double xi_edge, int m) {
  if (a == 0.0) return std::pow(xi_edge, 1 - m) / double(m - 1);
  const double x = a * xi_edge;
  if (x <= 40.0) {
    // J_m(x) = int_x^inf e^{iu} u^{-m} du, upward recurrence from E1
    Complex J = e1_neg_ix(x);
    const Complex eix = std::exp(kI * x);
    for (int k = 1; k < m; ++k) J = (eix * std::pow(x, -k) + kI * J) / double(k);
    return std::pow(a, m - 1) * J;
  }
  // asymptotic integration by parts for large phase
  const Complex pref = -std::exp(kI * x) / (kI * a);
  double term = std::pow(xi_edge, -m);
  Complex tot(0.0, 0.0);
  double rising = 1.0;
  Complex iaj(1.0, 0.0);
  const Complex ia = kI * a;
  for (int j = 0; j < 25; ++j) {
    const Complex contrib = rising * term / iaj;
    tot += contrib;
    if (std::abs(contrib) < 1e-16 * std::abs(tot)) break;
    rising *= double(m + j);
    term /= xi_edge;
    iaj *= ia;
  }
  return pref * tot;
}

Complex ipow(int m) {
  static const Complex table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return table[((m % 4) + 4) % 4];
}

// Gauss-Legendre nodes/weights on [0, 1] via Golub-Welsch
struct GaussRule {
  RVec x, w;
};

const GaussRule& gauss64() {
  static const GaussRule rule = [] {
    const int n = 64;
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) {
      const double b = i / std::sqrt(4.0 * i * i - 1.0);
      J(i, i - 1) = J(i - 1, i) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    GaussRule r;
    r.x = (es.eigenvalues().array() + 1.0) * 0.5;
    r.w = 2.0 * es.eigenvectors().row(0).transpose().array().square() * 0.5;
    return r;
  }();
  return rule;
}

// correction field shared by the fast inverse and the dense inverse oracle:
// per-node aliasing corrections of the base two-half-line split and of the
// reflection half-line, already divided by sqrt(2 pi)
CVec inverse_correction_field(const CVec& psi, const GridSpec& g, double q) {
  const Eigen::Index N = g.N;
  const double h = g.dxi();
  CVec out(N);

  // base term, treated as two half-line trapezoids over [0, Xi]
  const Complex f0 = psi[0];
  Complex fwd7[7], bak7[7], ub7[7], uf7[7];
  for (int i = 0; i < 7; ++i) {
    fwd7[i] = psi[i];                       // psi(0), psi(h), ...
    bak7[i] = psi[(N - i) % N];             // psi(0), psi(-h), ...
    ub7[i] = psi[N / 2 - i];                // psi(Xi), psi(Xi - h), ...
    uf7[i] = psi[N / 2 + i];                // psi(-Xi), psi(-Xi + h), ...
  }
  const Derivs dp = onesided3(fwd7, h);     // derivatives of s -> psi(s) at 0+
  const Derivs dg = onesided3(bak7, h);     // derivatives of s -> psi(-s) at 0+
  const Derivs db = onesided3(ub7, h);      // derivatives of s -> psi(Xi - s)
  const Derivs da = onesided3(uf7, h);      // derivatives of s -> psi(-Xi + s)
  const Complex fXi = psi[N / 2];

  // reflection half-line P(s) = R(s) (psi(s) + psi(-s))
  const ScatteringCoeffs<double> sc{q};
  const Complex P0 = 2.0 * sc.reflection(0.0) * psi[0];
  Complex fP[7];
  fP[0] = P0;
  for (int i = 1; i < 7; ++i)
    fP[i] = sc.reflection(i * h) * (psi[i] + psi[N - i]);
  const Derivs dP = onesided3(fP, h);

  const double edge_sign = (N / 2) % 2 == 0 ? 1.0 : -1.0;
  for (Eigen::Index k = 0; k < N; ++k) {
    const double x = g.x(k);
    const double a = std::abs(x);
    const Complex cb = image_corr(f0, dp.d1, dp.d2, dp.d3, -x, h) +
                       image_corr(f0, dg.d1, dg.d2, dg.d3, +x, h);
    // upper endpoints at the band edge Xi carry the phase (-1)^(k - N/2)
    const double ph = (k % 2 == 0 ? 1.0 : -1.0) * edge_sign;
    const Complex cxi = -ph * (image_corr(fXi, -db.d1, db.d2, -db.d3, -x, h) +
                               image_corr(fXi, -da.d1, da.d2, -da.d3, +x, h));
    const Complex cp = image_corr(P0, dP.d1, dP.d2, dP.d3, -a, h);
    out[k] = (cb + cxi + cp) / kSqrt2Pi;
  }
  return out;
}

// forward correction field: aliasing correction of the half-line transform of
// g(s) = phi(s) + phi(-s), weighted by conj(R)(|xi_m|) / sqrt(2 pi)
CVec forward_correction_field(const CVec& phi, const GridSpec& g, double q) {
  const Eigen::Index N = g.N;
  const double h = g.dx();
  const ScatteringCoeffs<double> sc{q};
  Complex f5[5];
  f5[0] = 2.0 * phi[N / 2];
  for (int i = 1; i < 5; ++i) f5[i] = phi[N / 2 + i] + phi[N / 2 - i];
  const auto [d1, d2] = onesided2(f5, h);
  CVec out(N);
  for (Eigen::Index m = 0; m < N; ++m) {
    const double axi = std::abs(g.xi(m));
    const Complex c = image_corr(f5[0], d1, d2, Complex(0, 0), axi, h);
    out[m] = std::conj(sc.reflection(axi)) * c / kSqrt2Pi;
  }
  return out;
}

}  // namespace

DistortedTransformPlan::DistortedTransformPlan(const GridSpec& grid, double q, int pad,
                                               double band_edge_tol)
    : grid_(grid),
      spectral_(GridSpec::make(grid.L * pad, grid.N * pad)),
      coeffs_(ScatteringCoeffs<double>::make(q)),
      pad_(pad),
      band_edge_tol_(band_edge_tol) {
  if (pad < 1) throw DomainError("pad factor must be >= 1");
}

CVec DistortedTransformPlan::forward_raw(const CVec& phi, const GridSpec& g) const {
  const Eigen::Index N = g.N;
  if (phi.size() != N) throw GridMismatch("forward_raw");
  const double dx = g.dx();

  CVec base = fft(phi);
  for (Eigen::Index m = 0; m < N; ++m)
    base[m] *= (m % 2 == 0 ? 1.0 : -1.0) * dx / kSqrt2Pi;

  // half-line samples g(s_j) = phi(s_j) + phi(-s_j), endpoints counted once
  CVec G = CVec::Zero(N);
  G[0] = phi[N / 2];
  for (Eigen::Index j = 1; j < N / 2; ++j) G[j] = phi[N / 2 + j] + phi[N / 2 - j];
  G[N / 2] = phi[0];
  const CVec Ghat = fft(G);

  const CVec corr = forward_correction_field(phi, g, coeffs_.q);
  CVec out(N);
  for (Eigen::Index m = 0; m < N; ++m) {
    const Eigen::Index bin = std::abs(g.mode(m));
    const Complex I = dx * Ghat[bin];
    out[m] = base[m] + std::conj(coeffs_.reflection(std::abs(g.xi(m)))) * I / kSqrt2Pi -
             corr[m];
  }
  return out;
}

CVec DistortedTransformPlan::inverse_raw(const CVec& psi, const GridSpec& g) const {
  const Eigen::Index N = g.N;
  if (psi.size() != N) throw GridMismatch("inverse_raw");
  const double dxi = g.dxi();

  CVec tmp(N);
  for (Eigen::Index m = 0; m < N; ++m) tmp[m] = psi[m] * (m % 2 == 0 ? 1.0 : -1.0);
  CVec base = ifft(tmp);
  base *= dxi * double(N) / kSqrt2Pi;

  // reflection half-line P(s) = R(s)(psi(s) + psi(-s)); its transform with
  // e^{+i a s} is conj(fft(conj(P)))
  CVec P = CVec::Zero(N);
  P[0] = coeffs_.reflection(0.0) * psi[0];
  for (Eigen::Index m = 1; m < N / 2; ++m)
    P[m] = coeffs_.reflection(m * dxi) * (psi[m] + psi[N - m]);
  P[N / 2] = coeffs_.reflection(N / 2 * dxi) * psi[N / 2];
  const CVec Phat = fft(P.conjugate()).conjugate();

  const CVec corr = inverse_correction_field(psi, g, coeffs_.q);
  CVec out(N);
  for (Eigen::Index k = 0; k < N; ++k) {
    const Eigen::Index bin = std::abs(k - N / 2);
    out[k] = base[k] + dxi * Phat[bin] / kSqrt2Pi - corr[k];
  }
  return out;
}

std::array<Complex, 3> DistortedTransformPlan::fit_tail(const CVec& psi,
                                                        const GridSpec& g) const {
  const Eigen::Index N = g.N;
  const double dxi = g.dxi();
  const double q = coeffs_.q;
  Eigen::Matrix3cd A;
  Eigen::Vector3cd y;
  const double fracs[3] = {0.80, 0.88, 0.96};
  for (int r = 0; r < 3; ++r) {
    const Eigen::Index mi = static_cast<Eigen::Index>(N / 2 * fracs[r]);
    const double s = mi * dxi;
    const Complex Pm = coeffs_.reflection(s) * (psi[mi] + psi[N - mi]);
    y[r] = Pm * (s * s + q * q) * kSqrt2Pi / (2.0 * q * q);
    const Complex is = kI * s;
    A(r, 0) = 1.0 / is;
    A(r, 1) = 1.0 / (is * is);
    A(r, 2) = 1.0 / (is * is * is);
  }
  const Eigen::Vector3cd c = A.fullPivLu().solve(y);
  return {c[0], c[1], c[2]};
}

double DistortedTransformPlan::tail_mass(const std::array<Complex, 3>& c,
                                         double xi_edge) const {
  const double q = coeffs_.q;
  const auto& gl = gauss64();
  const double ue = 1.0 / xi_edge;
  double I = 0.0;
  for (Eigen::Index i = 0; i < gl.x.size(); ++i) {
    const double u = gl.x[i] * ue;
    if (u == 0.0) continue;
    const double s = 1.0 / u;
    const Complex is = kI * s;
    const Complex mdl = c[0] / is + c[1] / (is * is) + c[2] / (is * is * is);
    const double f = q * q / (s * s + q * q) * std::norm(mdl);
    I += gl.w[i] * ue * f / (u * u);
  }
  return 2.0 * I / (2.0 * kPi);
}

double DistortedTransformPlan::spectral_l2(const ComplexField& psi) const {
  const double band = psi.v.squaredNorm() * psi.grid.dxi();
  const auto c = fit_tail(psi.v, psi.grid);
  return std::sqrt(band + tail_mass(c, psi.grid.xi_max()));
}

double DistortedTransformPlan::band_edge_fraction(const ComplexField& psi) const {
  const GridSpec& g = psi.grid;
  const double total = std::sqrt(psi.v.squaredNorm() * g.dxi());
  if (total == 0.0) return 0.0;
  const auto c = fit_tail(psi.v, g);
  const Eigen::Index lo = static_cast<Eigen::Index>(0.98 * double(g.N / 2));
  double acc = 0.0;
  for (Eigen::Index m = 0; m < g.N; ++m) {
    const Eigen::Index am = std::abs(g.mode(m));
    if (am < lo) continue;
    const double s = am * g.dxi();
    const Complex is = kI * s;
    const Complex mdl = std::conj(coeffs_.reflection(s)) *
                        (c[0] / is + c[1] / (is * is) + c[2] / (is * is * is)) / kSqrt2Pi;
    acc += std::norm(psi.v[m] - mdl) * g.dxi();
  }
  return std::sqrt(acc) / total;
}

ComplexField DistortedTransformPlan::forward(const ComplexField& phi) const {
  if (phi.space != Space::Position) throw DomainError("forward needs a position field");
  require_same_grid(phi.grid, grid_, "forward");
  // tripwire against grossly non-decaying inputs; long evolutions carry
  // wrapped high-frequency radiation at small absolute amplitude, which the
  // quadrature tolerates with smoothly degrading accuracy
  require_boundary_decay(phi, 0.5, "forward");
  CVec padded = CVec::Zero(spectral_.N);
  const Eigen::Index k0 = (pad_ - 1) * grid_.N / 2;
  padded.segment(k0, grid_.N) = phi.v;
  return ComplexField{spectral_, Space::Frequency, forward_raw(padded, spectral_)};
}

ComplexField DistortedTransformPlan::inverse(const ComplexField& psi) const {
  if (psi.space != Space::Frequency) throw DomainError("inverse needs a frequency field");
  require_same_grid(psi.grid, spectral_, "inverse");
  const double bf = band_edge_fraction(psi);
  if (bf >= band_edge_tol_) {
    throw BandEdge("inverse: band-edge residual fraction " + std::to_string(bf));
  }
  CVec full = inverse_raw(psi.v, spectral_);

  // complete the integral beyond the band edge with the fitted algebraic tail
  const auto c = fit_tail(psi.v, spectral_);
  const double q = coeffs_.q;
  const double xi_edge = spectral_.xi_max();
  const Eigen::Index M = spectral_.N;
  // coefficients of s^{-m} from conj(R) ~ sum_j (-q)^j (is)^{-j} times the model
  Complex dco[10] = {}, pco[10] = {};
  double bj = 1.0;
  for (int j = 1; j <= 4; ++j) {
    bj *= -q;
    for (int k = 0; k < 3; ++k) dco[j + k + 1] += bj * c[k] / ipow(j + k + 1);
  }
  const double qf[3] = {1.0, -q * q, q * q * q * q};
  for (int k = 0; k < 3; ++k)
    for (int j = 0; j < 3; ++j) pco[k + 3 + 2 * j] += qf[j] * c[k] / ipow(k + 1);

  CVec comp(M / 2 + 1);
  for (Eigen::Index j = 0; j <= M / 2; ++j) {
    const double a = j * spectral_.dx();
    Complex bsum(0, 0), csum(0, 0);
    for (int m = 2; m <= 9; ++m) {
      const Complex Im = tail_integral(a, xi_edge, m);
      bsum += dco[m] * (Im + std::conj(Im));
      csum += pco[m] * Im;
    }
    comp[j] = bsum / (2.0 * kPi) + (2.0 * q * q / (2.0 * kPi)) * csum;
  }
  for (Eigen::Index k = 0; k < M; ++k) full[k] += comp[std::abs(k - M / 2)];

  const Eigen::Index k0 = (pad_ - 1) * grid_.N / 2;
  return ComplexField{grid_, Space::Position, full.segment(k0, grid_.N)};
}

CVec DistortedTransformPlan::forward_oracle(const CVec& phi, const GridSpec& g) const {
  const Eigen::Index N = g.N;
  if (phi.size() != N) throw GridMismatch("forward_oracle");
  const double dx = g.dx();
  // dense row m: (dx / sqrt(2 pi)) sum_k conj(K(x_k, xi_m)) phi_k, evaluated
  // through a shared root-of-unity table, minus the same endpoint correction
  // as the fast path
  CVec W(N);
  for (Eigen::Index j = 0; j < N; ++j) W[j] = std::exp(-2.0 * kPi * kI * double(j) / double(N));
  const CVec corr = forward_correction_field(phi, g, coeffs_.q);
  CVec out(N);
  for (Eigen::Index m = 0; m < N; ++m) {
    const Eigen::Index am = std::abs(g.mode(m));
    const Complex Rb = std::conj(coeffs_.reflection(am * g.dxi()));
    const double sgn = m % 2 == 0 ? 1.0 : -1.0;
    Complex acc(0, 0);
    for (Eigen::Index k = 0; k < N; ++k) {
      const Complex plane = sgn * W[(m * k) % N];                   // e^{-i xi_m x_k}
      const Complex half = W[(am * std::abs(k - N / 2)) % N];       // e^{-i|xi_m||x_k|}
      acc += (plane + Rb * half) * phi[k];
    }
    out[m] = acc * dx / kSqrt2Pi - corr[m];
  }
  return out;
}

CVec DistortedTransformPlan::inverse_oracle(const CVec& psi, const GridSpec& g) const {
  const Eigen::Index N = g.N;
  if (psi.size() != N) throw GridMismatch("inverse_oracle");
  const double dxi = g.dxi();
  CVec W(N);
  for (Eigen::Index j = 0; j < N; ++j) W[j] = std::exp(2.0 * kPi * kI * double(j) / double(N));
  const CVec corr = inverse_correction_field(psi, g, coeffs_.q);
  CVec out(N);
  for (Eigen::Index k = 0; k < N; ++k) {
    const Eigen::Index ak = std::abs(k - N / 2);
    Complex acc(0, 0);
    for (Eigen::Index m = 0; m < N; ++m) {
      const Eigen::Index am = std::abs(g.mode(m));
      const double sgn = m % 2 == 0 ? 1.0 : -1.0;
      const Complex plane = sgn * W[(m * k) % N];                   // e^{+i xi_m x_k}
      const Complex half = coeffs_.reflection(am * dxi) * W[(am * ak) % N];
      acc += (plane + half) * psi[m];
    }
    out[k] = acc * dxi / kSqrt2Pi - corr[k];
  }
  return out;
}

}  // namespace dnls
