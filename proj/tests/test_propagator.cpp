#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dnls/grid.hpp"
#include "dnls/propagator.hpp"
#include "dnls/transform.hpp"

using namespace dnls;

namespace {

ComplexField gaussian(const GridSpec& g, double scale = 1.0, double k_mod = 0.0) {
  ComplexField f = ComplexField::zero(g, Space::Position);
  for (Eigen::Index k = 0; k < g.N; ++k) {
    const double x = g.x(k);
    f.v[k] = scale * std::exp(-0.5 * x * x) * std::exp(kI * k_mod * x);
  }
  return f;
}

// exact free evolution of e^{-x^2/2}: (1+it)^{-1/2} e^{-x^2/(2(1+it))}
ComplexField free_gaussian(const GridSpec& g, double t) {
  ComplexField f = ComplexField::zero(g, Space::Position);
  const Complex a = 1.0 + kI * t;
  for (Eigen::Index k = 0; k < g.N; ++k) {
    const double x = g.x(k);
    f.v[k] = std::exp(-0.5 * x * x / a) / std::sqrt(a);
  }
  return f;
}

ComplexField run_to(const DistortedTransformPlan& plan, const ComplexField& u0,
                    double lambda, double T, double dt) {
  EvolutionState s = make_state(plan, u0, lambda);
  const int steps = static_cast<int>(std::llround(T / dt));
  for (int i = 0; i < steps; ++i) s = step_strang(std::move(s), dt);
  return s.u;
}

}  // namespace

TEST_CASE("linear flow: identity at t = 0, group law, mass and energy") {
  const GridSpec grid = GridSpec::make(40.0, 1024);
  const DistortedTransformPlan plan(grid, 1.0);
  const ComplexField phi = gaussian(grid, 1.0, 0.5);
  const ComplexField id = linear_flow(plan, phi, 0.0);
  CHECK((id.v - phi.v).cwiseAbs().maxCoeff() < 1e-12);

  const ComplexField one_shot = linear_flow(plan, phi, 1.3);
  const ComplexField two_step = linear_flow(plan, linear_flow(plan, phi, 0.8), 0.5);
  CHECK((one_shot.v - two_step.v).cwiseAbs().maxCoeff() < 1e-6);

  const double m0 = norm(phi, Norm::L2);
  CHECK(std::abs(norm(one_shot, Norm::L2) - m0) < 1e-10 * m0);
  const double e0 = energy_of(phi, 1.0, 0.0);
  const double e1 = energy_of(one_shot, 1.0, 0.0);
  CHECK(std::abs(e1 - e0) < 1e-8 * std::abs(e0));
}

TEST_CASE("rank-one small step agrees with the Krylov propagator") {
  // dx = 1/16 as in production runs; dt * ||H|| ~ 12.6 uses the fast path,
  // 2 dt falls back to Krylov
  const GridSpec grid = GridSpec::make(64.0, 2048);
  const DistortedTransformPlan plan(grid, 1.0);
  ComplexField u = gaussian(grid, 0.1, 0.9);
  for (Eigen::Index k = 0; k < grid.N; ++k)
    u.v[k] += 1e-4 * std::exp(kI * 40.0 * grid.x(k)) * std::exp(-1e-3 * grid.x(k) * grid.x(k));
  const double dt = 0.01;
  const ComplexField two_fast = linear_flow(plan, linear_flow(plan, u, dt), dt);
  const ComplexField krylov = linear_flow(plan, u, 2.0 * dt);
  CHECK((two_fast.v - krylov.v).cwiseAbs().maxCoeff() < 1e-12);
  const double m0 = norm(u, Norm::L2);
  CHECK(std::abs(norm(two_fast, Norm::L2) / m0 - 1.0) < 1e-13);
}

TEST_CASE("band_prepare trims the distorted spectral tail") {
  const GridSpec grid = GridSpec::make(40.0, 2048);
  const DistortedTransformPlan plan(grid, 1.0);
  const ComplexField u0 = gaussian(grid, 0.05);
  const ComplexField prepped = band_prepare(plan, u0, 7.0);
  const ComplexField before = plan.forward(u0);
  const ComplexField after = plan.forward(prepped);
  double tail_before = 0.0, tail_after = 0.0;
  for (Eigen::Index m = 0; m < before.grid.N; ++m) {
    if (std::abs(before.grid.xi(m)) < 10.0) continue;
    tail_before = std::max(tail_before, std::abs(before.v[m]));
    tail_after = std::max(tail_after, std::abs(after.v[m]));
  }
  CHECK(tail_before > 1e-6);           // the generic q phi(0)/xi^2 tail is there
  CHECK(tail_after < 1e-2 * tail_before);
  // the field itself barely changes
  CHECK((prepped.v - u0.v).cwiseAbs().maxCoeff() < 0.05 * norm(u0, Norm::Linf));
  CHECK_THROWS_AS((void)band_prepare(plan, u0, -1.0), DomainError);
  CHECK_THROWS_AS((void)band_prepare(plan, u0, 7.0, 3), DomainError);
}

TEST_CASE("linear flow reduces to exact free evolution at tiny q") {
  const GridSpec grid = GridSpec::make(40.0, 1024);
  const DistortedTransformPlan plan(grid, 1e-3);
  const ComplexField u1 = linear_flow(plan, gaussian(grid), 1.0);
  const ComplexField exact = free_gaussian(grid, 1.0);
  ComplexField diff{grid, Space::Position, u1.v - exact.v};
  CHECK(norm(diff, Norm::L2) < 1e-2);
}

TEST_CASE("strang step: lambda = 0 reduction and mass invariant") {
  const GridSpec grid = GridSpec::make(40.0, 1024);
  const DistortedTransformPlan plan(grid, 1.0);
  const ComplexField u0 = gaussian(grid, 0.5);
  EvolutionState s = make_state(plan, u0, 0.0);
  for (int i = 0; i < 10; ++i) s = step_strang(std::move(s), 0.05);
  const ComplexField lin = linear_flow(plan, u0, 0.5);
  CHECK((s.u.v - lin.v).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(s.monitors.size() == 11);  // seed + one per step
  const double m0 = s.monitors.front().mass;
  CHECK(std::abs(s.monitors.back().mass - m0) < 1e-10 * m0);
}

TEST_CASE("strang splitting is second order at small q") {
  const GridSpec grid = GridSpec::make(20.0, 512);
  const DistortedTransformPlan plan(grid, 1e-3);
  const ComplexField u0 = gaussian(grid, 0.7);
  const ComplexField ref = run_to(plan, u0, 1.0, 1.0, 0.00625);
  const ComplexField c1 = run_to(plan, u0, 1.0, 1.0, 0.05);
  const ComplexField c2 = run_to(plan, u0, 1.0, 1.0, 0.025);
  const double e1 = (c1.v - ref.v).cwiseAbs().maxCoeff();
  const double e2 = (c2.v - ref.v).cwiseAbs().maxCoeff();
  const double order = std::log2(e1 / e2);
  CHECK(order > 1.8);
  CHECK(order < 2.2);
}

TEST_CASE("nonlinear energy drift stays small") {
  const GridSpec grid = GridSpec::make(40.0, 1024);
  const DistortedTransformPlan plan(grid, 1.0);
  const ComplexField u0 = gaussian(grid, 0.1);
  EvolutionState s = make_state(plan, u0, 1.0);
  const double e0 = energy(s);
  for (int i = 0; i < 100; ++i) s = step_strang(std::move(s), 0.01);
  CHECK(std::abs(energy(s) - e0) < 1e-4 * std::abs(e0));
}

TEST_CASE("delta jump condition") {
  const GridSpec grid = GridSpec::make(20.0, 2048);
  // e^{-2|x| - x^2} has u'(0+) - u'(0-) = -4 = 2 q u(0) at q = -2
  ComplexField kink = ComplexField::zero(grid, Space::Position);
  for (Eigen::Index k = 0; k < grid.N; ++k) {
    const double x = grid.x(k);
    kink.v[k] = std::exp(-2.0 * std::abs(x) - x * x);
  }
  CHECK(jump_defect(kink, -2.0) < 1e-4);
  CHECK(jump_defect(kink, 1.0) == doctest::Approx(6.0).epsilon(1e-4));
}

TEST_CASE("modulate and dilate") {
  const GridSpec grid = GridSpec::make(32.0, 1024);  // x = 2 lands on a node
  const ComplexField f = gaussian(grid);
  const ComplexField mf = modulate(f, 3.0);
  CHECK(std::abs(norm(mf, Norm::L2) - norm(f, Norm::L2)) < 1e-12);
  for (Eigen::Index k = 0; k < grid.N; ++k)
    CHECK(std::abs(std::abs(mf.v[k]) - std::abs(f.v[k])) < 1e-13);

  const ComplexField df = dilate(f, 2.0, grid);
  CHECK(std::abs(norm(df, Norm::L2) - norm(f, Norm::L2)) < 1e-8);
  // D(2) e^{-x^2/2} at x = 2 is (2i)^{-1/2} e^{-1/2}
  const Eigen::Index k2 = grid.origin() + static_cast<Eigen::Index>(2.0 / grid.dx());
  const Complex expect = std::exp(-kI * kPi / 4.0) / std::sqrt(2.0) * std::exp(-0.5);
  CHECK(std::abs(df.v[k2] - expect) < 1e-9);
}

TEST_CASE("w variable: unitarity chain and snapshot records") {
  const GridSpec grid = GridSpec::make(40.0, 1024);
  const DistortedTransformPlan plan(grid, 1.0);
  EvolutionState s = make_state(plan, gaussian(grid, 0.3), 1.0);
  for (int i = 0; i < 10; ++i) s = step_strang(std::move(s), 0.05);
  const ComplexField w = to_w(s);
  const double mu = norm(s.u, Norm::L2);
  // the defect tracks the kink's band-edge radiation mass; the 1e-8 level is
  // reached only for smooth fields (see the transform unitarity tests)
  CHECK(std::abs(norm(w, Norm::L2) - mu) < 1e-4 * mu);
  const Snapshot snap = take_snapshot(s);
  CHECK(snap.t == doctest::Approx(0.5));
  CHECK(snap.norms.u_inf == doctest::Approx(norm(s.u, Norm::Linf)));
  CHECK(snap.norms.w_at_zero_abs == doctest::Approx(std::abs(w.v[0])));
  CHECK(snap.norms.mass == doctest::Approx(mu * mu));
}

TEST_CASE("snapshot schedule") {
  const std::vector<double> times = snapshot_times(16.0);
  REQUIRE(times.size() == 17);
  CHECK(times.front() == doctest::Approx(1.0));
  CHECK(times.back() == doctest::Approx(16.0));
  for (size_t i = 1; i < times.size(); ++i)
    CHECK(times[i] / times[i - 1] == doctest::Approx(std::pow(2.0, 0.25)));
}
