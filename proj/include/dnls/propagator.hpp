#pragma once

#include <vector>

#include "dnls/grid.hpp"
#include "dnls/transform.hpp"

namespace dnls {

struct MonitorSample {
  double t = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double u_inf = 0.0;
};

struct NormsRecord {
  double u_inf = 0.0;
  double w_inf = 0.0;
  double w_h1 = 0.0;
  double w_at_zero_abs = 0.0;
  double mass = 0.0;
  double energy = 0.0;
};

// One evolving solution of i u_t = H u + lambda |u|^2 u.
struct EvolutionState {
  double t = 0.0;
  ComplexField u;
  const DistortedTransformPlan* plan = nullptr;
  double lambda = 0.0;
  double mass0 = 0.0;
  double energy0 = 0.0;
  std::vector<MonitorSample> monitors;
};

struct Snapshot {
  double t = 0.0;
  ComplexField u;
  ComplexField w;  // e^{i t xi^2 / 2} F_q u, on the plan's spectral grid
  NormsRecord norms;
};

EvolutionState make_state(const DistortedTransformPlan& plan, const ComplexField& u0,
                          double lambda);

// Smooth band-limit in the distorted basis: u -> F_q^{-1}[ chi(xi) F_q u ]
// with chi = exp(-(xi/xi_cut)^order).  Generic Sigma data carries a q phi(0)
// / xi^2 spectral tail; on a periodic box, components with |xi| > 2L/T
// re-encounter the delta within the run and the line dynamics is lost, so
// runs prepare data inside the faithful band.
ComplexField band_prepare(const DistortedTransformPlan& plan, const ComplexField& u0,
                          double xi_cut, int order = 8);

// exp(-i t H) phi for the discretized H = -1/2 d^2/dx^2 + q delta(x),
// computed by adaptively substepped Krylov exponentials (exact FFT phases at
// q = 0); exactly mass-preserving to roundoff
ComplexField linear_flow(const DistortedTransformPlan& plan, const ComplexField& phi,
                         double t);

// Strang step: half nonlinear phase, full linear flow, half nonlinear phase.
// Asserts the relative mass-drift invariant (< 1e-8) continuously.
EvolutionState step_strang(EvolutionState state, double dt);

double energy(const EvolutionState& state);
double energy_of(const ComplexField& u, double q, double lambda);

// [M(t) f](x) = e^{i x^2 / (2t)} f(x)
ComplexField modulate(const ComplexField& f, double t);
// [D(t) f](x) = (i t)^{-1/2} f(x / t), band-limited resampling onto target
ComplexField dilate(const ComplexField& f, double t, const GridSpec& target);

// w(t) = F_q U(-t) u(t) = e^{i t xi^2 / 2} F_q u(t)
ComplexField to_w(const EvolutionState& state);

Snapshot take_snapshot(const EvolutionState& state);

// |[u'(0+) - u'(0-)] - 2 q u(0)| via one-sided 4th-order differences
double jump_defect(const ComplexField& u, double q);

// log-spaced snapshot schedule t_k = 2^{k / per_octave} up to t_max
std::vector<double> snapshot_times(double t_max, int per_octave = 4);

}  // namespace dnls
