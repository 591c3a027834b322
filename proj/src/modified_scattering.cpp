#include "dnls/modified_scattering.hpp"

#include <cmath>

#include "dnls/scattering.hpp"

namespace dnls {

namespace {

GridSpec profile_grid_of(const GridSpec& freq) {
  return GridSpec::make(freq.xi_max(), freq.N);
}

CVec upsample8(const CVec& v) {
  const Eigen::Index N = v.size(), Nf = 8 * N;
  CVec spec = fft(v);
  CVec pad = CVec::Zero(Nf);
  pad.head(N / 2) = spec.head(N / 2);
  pad.tail(N / 2) = spec.tail(N / 2);
  return ifft(pad) * 8.0;
}

void require_run(const std::vector<Snapshot>& run, const char* where) {
  if (run.empty()) throw InsufficientRun(std::string(where) + ": empty run");
  for (size_t i = 1; i < run.size(); ++i) {
    if (!(run[i].t > run[i - 1].t)) throw NonMonotoneTimes(where);
  }
}

}  // namespace

ComplexField freq_to_profile(const ComplexField& w) {
  if (w.space != Space::Frequency) throw DomainError("freq_to_profile needs a frequency field");
  const Eigen::Index N = w.grid.N;
  ComplexField out{profile_grid_of(w.grid), Space::Position, CVec(N)};
  for (Eigen::Index k = 0; k < N; ++k) out.v[k] = w.v[(k - N / 2 + N) % N];
  return out;
}

ComplexField profile_to_freq(const ComplexField& p, const GridSpec& freq_grid) {
  if (p.space != Space::Position) throw DomainError("profile_to_freq needs a profile field");
  if (p.grid.N != freq_grid.N || p.grid != profile_grid_of(freq_grid))
    throw GridMismatch("profile_to_freq");
  const Eigen::Index N = p.grid.N;
  ComplexField out{freq_grid, Space::Frequency, CVec(N)};
  for (Eigen::Index k = 0; k < N; ++k) out.v[(k - N / 2 + N) % N] = p.v[k];
  return out;
}

SMatrixField SMatrixField::make(const GridSpec& grid, double q) {
  const ScatteringCoeffs<double> sc = ScatteringCoeffs<double>::make(q);
  SMatrixField S{grid, CVec(grid.N), CVec(grid.N)};
  for (Eigen::Index k = 0; k < grid.N; ++k) {
    const auto [t, r] = sc.s_vector(grid.x(k));
    S.s1[k] = t;
    S.s2[k] = r;
  }
  return S;
}

AMatrixField assemble_A(const SMatrixField& S, const ComplexField& w) {
  require_same_grid(S.grid, w.grid, "assemble_A");
  const ComplexField wr = reflect(w);
  AMatrixField A{S.grid, RVec(S.grid.N), RVec(S.grid.N), CVec(S.grid.N)};
  for (Eigen::Index k = 0; k < S.grid.N; ++k) {
    const Complex s1 = S.s1[k], s2 = S.s2[k];
    const double p = std::norm(s1 * w.v[k] + s2 * wr.v[k]);   // |S . (w, w_)|^2
    const double m = std::norm(s1 * wr.v[k] + s2 * w.v[k]);   // |S . (w_, w)|^2
    A.a11[k] = p * std::norm(s1) + m * std::norm(s2);
    A.a22[k] = p * std::norm(s2) + m * std::norm(s1);
    A.a12[k] = p * std::conj(s1) * s2 + m * std::conj(s2) * s1;
  }
  return A;
}

std::pair<ComplexField, ComplexField> to_f(const SMatrixField& S, const ComplexField& w) {
  require_same_grid(S.grid, w.grid, "to_f");
  const ComplexField wr = reflect(w);
  ComplexField f1{S.grid, Space::Position, CVec(S.grid.N)};
  ComplexField f2{S.grid, Space::Position, CVec(S.grid.N)};
  for (Eigen::Index k = 0; k < S.grid.N; ++k) {
    f1.v[k] = std::conj(S.s1[k]) * w.v[k] - std::conj(S.s2[k]) * wr.v[k];
    f2.v[k] = S.s2[k] * w.v[k] + S.s1[k] * wr.v[k];
  }
  return {std::move(f1), std::move(f2)};
}

GSeries accumulate_g(const std::vector<Snapshot>& run, double lambda, double q) {
  require_run(run, "accumulate_g");
  const ComplexField w0 = freq_to_profile(run.front().w);
  const SMatrixField S = SMatrixField::make(w0.grid, q);
  GSeries out;
  out.grid = w0.grid;
  RVec phase1 = RVec::Zero(w0.grid.N), phase2 = RVec::Zero(w0.grid.N);
  RVec prev1, prev2;
  double prev_t = 0.0;
  for (const Snapshot& snap : run) {
    const ComplexField wp = freq_to_profile(snap.w);
    auto [f1, f2] = to_f(S, wp);
    RVec a1 = f1.v.cwiseAbs2(), a2 = f2.v.cwiseAbs2();
    if (!out.t.empty()) {
      const double dls = std::log(snap.t) - std::log(prev_t);
      phase1 += 0.5 * dls * (prev1 + a1);
      phase2 += 0.5 * dls * (prev2 + a2);
    }
    CVec g1(w0.grid.N), g2(w0.grid.N);
    for (Eigen::Index k = 0; k < w0.grid.N; ++k) {
      g1[k] = std::exp(kI * lambda * phase1[k]) * f1.v[k];
      g2[k] = std::exp(kI * lambda * phase2[k]) * f2.v[k];
    }
    out.t.push_back(snap.t);
    out.g1.push_back(std::move(g1));
    out.g2.push_back(std::move(g2));
    prev1 = std::move(a1);
    prev2 = std::move(a2);
    prev_t = snap.t;
  }
  return out;
}

ProfileResult extract_profile(const std::vector<Snapshot>& run, double lambda, double q,
                              double beta, double interior_fraction) {
  require_run(run, "extract_profile");
  const double T = run.back().t;
  if (T < 64.0) throw InsufficientRun("extract_profile needs T >= 64, run reaches t = " +
                                      std::to_string(T));
  const ComplexField wT = freq_to_profile(run.back().w);
  const SMatrixField S = SMatrixField::make(wT.grid, q);
  auto [f1T, f2T] = to_f(S, wT);

  ProfileResult res;
  res.beta = beta;
  res.T = T;
  res.W = ComplexField{wT.grid, Space::Position, CVec(wT.grid.N)};
  for (Eigen::Index k = 0; k < wT.grid.N; ++k) {
    const Complex phi1 = std::exp(kI * lambda * std::norm(f1T.v[k]) * std::log(T)) * f1T.v[k];
    res.W.v[k] = (S.s1[k] + S.s2[k]) * phi1;
  }

  const DistortedTransformPlan vplan(wT.grid, q, 1);
  const double edge = interior_fraction * wT.grid.L;
  for (const Snapshot& snap : run) {
    if (snap.t < 1.0) continue;
    const ComplexField wp = freq_to_profile(snap.w);
    const VApplication app = VApplication::make(snap.t, VMode::FastComposition, vplan);
    const ComplexField vw = apply_V(app, wp);
    double sup = 0.0;
    for (Eigen::Index k = 0; k < wT.grid.N; ++k) {
      if (std::abs(wT.grid.x(k)) > edge) continue;
      const Complex pred =
          std::exp(-kI * lambda * std::norm(res.W.v[k]) * std::log(snap.t)) * res.W.v[k];
      sup = std::max(sup, std::abs(vw.v[k] - pred));
    }
    res.times.push_back(snap.t);
    res.residual.push_back(sup);
  }
  res.fit = fit_rate(res.times, res.residual, T / 16.0, T);
  return res;
}

RateFit theorem_residual(const std::vector<Snapshot>& run, const ComplexField& W,
                         double lambda, double t_lo, double t_hi,
                         double interior_fraction, std::vector<double>* series) {
  require_run(run, "theorem_residual");
  std::vector<double> ts, rs;
  for (const Snapshot& snap : run) {
    if (snap.t < 1.0) continue;
    const GridSpec& g = snap.u.grid;
    const double edge = interior_fraction * g.L;
    RVec pts(g.N);
    for (Eigen::Index k = 0; k < g.N; ++k) pts[k] = g.x(k) / snap.t;
    const CVec Wv = sample_profile(W, pts);
    const Complex amp = std::exp(-kI * kPi / 4.0) / std::sqrt(snap.t);  // (it)^{-1/2}
    double sup = 0.0;
    for (Eigen::Index k = 0; k < g.N; ++k) {
      const double x = g.x(k);
      if (std::abs(x) > edge) continue;
      const Complex pred = amp * std::exp(kI * x * x / (2.0 * snap.t)) * Wv[k] *
                           std::exp(-kI * lambda * std::norm(Wv[k]) * std::log(snap.t));
      sup = std::max(sup, std::abs(snap.u.v[k] - pred));
    }
    ts.push_back(snap.t);
    rs.push_back(sup);
    if (series != nullptr) series->push_back(sup);
  }
  return fit_rate(ts, rs, t_lo, t_hi);
}

MonitorReport bound_monitors(const std::vector<Snapshot>& run, double epsilon, double beta) {
  MonitorReport rep;
  rep.beta = beta;
  if (epsilon <= 0.0) return rep;
  for (const Snapshot& snap : run) {
    const double jt = std::sqrt(1.0 + snap.t * snap.t);  // <t>
    rep.w_inf_ratio = std::max(rep.w_inf_ratio, snap.norms.w_inf / epsilon);
    rep.w_h1_ratio =
        std::max(rep.w_h1_ratio, std::pow(jt, -beta) * snap.norms.w_h1 / epsilon);
    rep.u_decay_ratio =
        std::max(rep.u_decay_ratio, std::sqrt(jt) * snap.norms.u_inf / epsilon);
  }
  return rep;
}

ComplexField nonlinear_term(const VApplication& app, const ComplexField& w_profile) {
  const ComplexField vw = apply_V(app, w_profile);
  ComplexField cubed = vw;
  for (Eigen::Index k = 0; k < cubed.grid.N; ++k) cubed.v[k] *= std::norm(vw.v[k]);
  return apply_Vinv(app, cubed);
}

double ode_residual(const Snapshot& before, const Snapshot& at, const Snapshot& after,
                    double lambda, double q, double interior_fraction) {
  if (!(before.t < at.t && at.t < after.t)) throw NonMonotoneTimes("ode_residual");
  const ComplexField wb = freq_to_profile(before.w);
  const ComplexField wa = freq_to_profile(after.w);
  const ComplexField wc = freq_to_profile(at.w);
  const DistortedTransformPlan vplan(wc.grid, q, 1);
  const VApplication app = VApplication::make(at.t, VMode::FastComposition, vplan);
  const ComplexField nl = nonlinear_term(app, wc);
  const double span = after.t - before.t;
  const double edge = interior_fraction * wc.grid.L;
  double num = 0.0, den = 0.0;
  for (Eigen::Index k = 0; k < wc.grid.N; ++k) {
    if (std::abs(wc.grid.x(k)) > edge) continue;
    const Complex dwdt = (wa.v[k] - wb.v[k]) / span;
    const Complex rhs = -kI * lambda / at.t * nl.v[k];
    num += std::norm(dwdt - rhs);
    den += std::norm(rhs);
  }
  if (den == 0.0) return num == 0.0 ? 0.0 : 1.0;
  return std::sqrt(num / den);
}

double nle2_bound(const NormsRecord& n, double t) {
  const double tq = std::pow(t, -0.25);
  const double h1 = n.w_h1;
  const double mix = n.w_inf + tq * h1;
  return tq * h1 * h1 * h1 + mix * mix * h1;
}

CVec sample_profile(const ComplexField& W, const RVec& points) {
  if (W.space != Space::Position) throw DomainError("sample_profile needs a profile field");
  const Eigen::Index N = W.grid.N;
  const CVec fine = upsample8(W.v);
  const Eigen::Index Nf = 8 * N;
  const double hf = W.grid.dx() / 8.0;
  const double L = W.grid.L;
  CVec out(points.size());
  for (Eigen::Index p = 0; p < points.size(); ++p) {
    const double x = points[p];
    const double u = (x + L) / hf;
    const Eigen::Index i1 = static_cast<Eigen::Index>(std::floor(u));
    if (i1 < 1 || i1 + 2 >= Nf) {
      out[p] = Complex(0.0, 0.0);  // beyond the stored band: profile decayed
      continue;
    }
    const double s = u - double(i1);
    const Complex f0 = fine[i1 - 1], f1 = fine[i1], f2 = fine[i1 + 1], f3 = fine[i1 + 2];
    out[p] = 0.5 * (2.0 * f1 + s * (-f0 + f2) +
                    s * s * (2.0 * f0 - 5.0 * f1 + 4.0 * f2 - f3) +
                    s * s * s * (-f0 + 3.0 * f1 - 3.0 * f2 + f3));
  }
  return out;
}

}  // namespace dnls
