#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dnls/grid.hpp"
#include "dnls/transform.hpp"

using namespace dnls;

namespace {

ComplexField gaussian(const GridSpec& g, double center = 0.0, double k_mod = 0.0) {
  ComplexField f = ComplexField::zero(g, Space::Position);
  for (Eigen::Index k = 0; k < g.N; ++k) {
    const double x = g.x(k) - center;
    f.v[k] = std::exp(-0.5 * x * x) * std::exp(kI * k_mod * g.x(k));
  }
  return f;
}

// spectral-grid bin with xi closest to the requested value
Eigen::Index bin_at(const GridSpec& g, double xi) {
  const auto m = static_cast<Eigen::Index>(std::llround(xi / g.dxi()));
  return (m + g.N) % g.N;
}

double weighted_l2(const ComplexField& f) { return norm(f, Norm::L2); }

}  // namespace

TEST_CASE("forward transform against arbitrary-precision quadrature") {
  const GridSpec grid = GridSpec::make(40.0, 1024);
  struct Ref {
    double q, xi;
    Complex value;
  };
  // continuum F_q of e^{-x^2/2} and e^{-(x-1/2)^2/2}, adaptive quadrature
  const Ref gauss_refs[] = {
      {1.0, kPi / 2, {0.47532699294914971, 0.30260256205145463}},
      {1.0, kPi, {0.091663761677593789, 0.029177481546772992}},
      {1.0, -1.5 * kPi, {0.036229355699619919, 0.0076881080595053895}},
      {2.0, kPi / 2, {0.39857734581324944, 0.50748443832501121}},
      {2.0, kPi, {0.13855597863560094, 0.088207475579163731}},
      {2.0, -1.5 * kPi, {0.064151241596827943, 0.027226632548313547}},
  };
  for (double q : {1.0, 2.0}) {
    const DistortedTransformPlan plan(grid, q);
    const ComplexField psi = plan.forward(gaussian(grid));
    for (const auto& r : gauss_refs) {
      if (r.q != q) continue;
      CHECK(std::abs(psi.v[bin_at(psi.grid, r.xi)] - r.value) < 1e-8);
    }
  }
  const Ref shifted_refs[] = {
      {1.0, kPi / 2, {0.40209192091684652, 0.05006102732006702}},
      {1.0, -1.5 * kPi, {0.031464730484924325, 0.0066876739544581385}},
  };
  const DistortedTransformPlan plan(grid, 1.0);
  const ComplexField psi = plan.forward(gaussian(grid, 0.5));
  for (const auto& r : shifted_refs)
    CHECK(std::abs(psi.v[bin_at(psi.grid, r.xi)] - r.value) < 1e-8);
}

TEST_CASE("inverse transform against arbitrary-precision quadrature") {
  const GridSpec grid = GridSpec::make(40.0, 1024);
  const DistortedTransformPlan plan(grid, 1.0);
  // psi(xi) = e^{-xi^2/2} (1 + 0.3 i xi) built directly on the spectral grid
  const GridSpec sg = plan.spectral_grid();
  ComplexField psi = ComplexField::zero(sg, Space::Frequency);
  for (Eigen::Index m = 0; m < sg.N; ++m) {
    const double xi = sg.xi(m);
    psi.v[m] = std::exp(-0.5 * xi * xi) * (1.0 + 0.3 * kI * xi);
  }
  const ComplexField phi = plan.inverse(psi);
  struct Ref {
    double x;
    Complex value;
  };
  const Ref refs[] = {
      {0.0, {0.34432045758120153, -0.36818807232978798}},
      {1.25, {0.10981211435042031, -0.47341752369481373}},
      {-2.5, {0.065177463469666328, -0.28178758710381111}},
  };
  for (const auto& r : refs) {
    const auto k = static_cast<Eigen::Index>(std::llround((r.x + grid.L) / grid.dx()));
    CHECK(std::abs(phi.v[k] - r.value) < 1e-8);
  }
}

TEST_CASE("roundtrip, unitarity, and null at the origin") {
  const GridSpec grid = GridSpec::make(40.0, 2048);
  for (double q : {0.5, 1.0, 2.0}) {
    const DistortedTransformPlan plan(grid, q);
    for (double k_mod : {0.0, 0.8}) {
      const ComplexField phi = gaussian(grid, 0.3, k_mod);
      const ComplexField psi = plan.forward(phi);
      // spectrum of F_q vanishes at xi = 0
      ComplexField xphi = phi;
      for (Eigen::Index k = 0; k < grid.N; ++k)
        xphi.v[k] *= std::sqrt(1.0 + grid.x(k) * grid.x(k));
      CHECK(std::abs(psi.v[0]) < 1e-6 * weighted_l2(xphi));
      // L2 norm preserved once the off-band tail mass is counted
      CHECK(std::abs(plan.spectral_l2(psi) - weighted_l2(phi)) < 1e-8 * weighted_l2(phi));
      const ComplexField back = plan.inverse(psi);
      CHECK((back.v - phi.v).cwiseAbs().maxCoeff() < 1e-7);
    }
  }
}

TEST_CASE("fast path matches the dense same-rule oracle") {
  const GridSpec grid = GridSpec::make(20.0, 512);
  for (double q : {0.5, 2.0}) {
    const DistortedTransformPlan plan(grid, q);
    const ComplexField phi = gaussian(grid, -0.4, 1.1);
    const CVec fwd_fast = plan.forward_raw(phi.v, grid);
    const CVec fwd_dense = plan.forward_oracle(phi.v, grid);
    CHECK((fwd_fast - fwd_dense).cwiseAbs().maxCoeff() < 1e-7);
    const CVec inv_fast = plan.inverse_raw(fwd_fast, grid);
    const CVec inv_dense = plan.inverse_oracle(fwd_fast, grid);
    CHECK((inv_fast - inv_dense).cwiseAbs().maxCoeff() < 1e-7);
  }
}

TEST_CASE("linearity") {
  const GridSpec grid = GridSpec::make(40.0, 1024);
  const DistortedTransformPlan plan(grid, 1.0);
  const ComplexField a = gaussian(grid, 0.0, 0.5);
  const ComplexField b = gaussian(grid, 1.0, -0.2);
  ComplexField c = a;
  const Complex alpha(0.7, -1.2);
  c.v = alpha * a.v + b.v;
  const CVec lhs = plan.forward(c).v;
  const CVec rhs = alpha * plan.forward(a).v + plan.forward(b).v;
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("small-q limit approaches the plain Fourier transform") {
  const GridSpec grid = GridSpec::make(40.0, 1024);
  const double q = 1e-3;
  const DistortedTransformPlan plan(grid, q);
  const ComplexField phi = gaussian(grid);
  const ComplexField psi = plan.forward(phi);
  // F_0 of e^{-x^2/2} is e^{-xi^2/2}; the limit is not uniform near xi = 0,
  // where R(xi) = q/(i xi - q) stays at -1, so compare away from the origin
  double worst = 0.0;
  for (Eigen::Index m = 0; m < psi.grid.N; ++m) {
    const double xi = psi.grid.xi(m);
    if (std::abs(xi) < 1.0) continue;
    worst = std::max(worst, std::abs(psi.v[m] - std::exp(-0.5 * xi * xi)));
  }
  CHECK(worst < 5.0 * q);
  CHECK(std::abs(psi.v[0]) < 1e-8);
}

TEST_CASE("tail model leading coefficient recovers 2 phi(0)") {
  const GridSpec grid = GridSpec::make(40.0, 2048);
  const DistortedTransformPlan plan(grid, 1.0);
  const ComplexField phi = gaussian(grid, 0.0, 0.4);
  const CVec psi = plan.forward_raw(phi.v, grid);
  const auto c = plan.fit_tail(psi, grid);
  const Complex expect = 2.0 * phi.v[grid.origin()];
  CHECK(std::abs(c[0] - expect) < 5e-2 * std::abs(expect));
}

TEST_CASE("input validation") {
  const GridSpec grid = GridSpec::make(40.0, 1024);
  const DistortedTransformPlan plan(grid, 1.0);
  ComplexField wrong_space = gaussian(grid);
  wrong_space.space = Space::Frequency;
  CHECK_THROWS_AS((void)plan.forward(wrong_space), DomainError);
  CHECK_THROWS_AS((void)plan.inverse(gaussian(plan.spectral_grid())), DomainError);
  const GridSpec other = GridSpec::make(20.0, 1024);
  CHECK_THROWS_AS((void)plan.forward(gaussian(other)), GridMismatch);
  ComplexField flat = ComplexField::zero(grid, Space::Position);
  flat.v.setOnes();
  CHECK_THROWS_AS((void)plan.forward(flat), BoundaryMass);
  CHECK_THROWS_AS(DistortedTransformPlan(grid, 1.0, 0), DomainError);
}
