#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "deltasim/analytic.hpp"
#include "deltasim/error.hpp"
#include "deltasim/sweep.hpp"

using namespace deltasim;

namespace {

const AtomicConstants rb = AtomicConstants::rubidium85();
const ThermalEnv cold = ThermalEnv::at(0.0, rb);

}  // namespace

TEST_CASE("closed-form coherence") {
  SUBCASE("hand evaluation") {
    SystemParams p;
    p.gamma_c = 1.0;
    p.phi_mw = 0.0;
    const Complex r = analytic_rho31(p, 0.0, 63.624);
    CHECK(r.real() == doctest::Approx(-5.12 / 51.96275).epsilon(1e-9));
    CHECK(r.imag() == doctest::Approx(2.0005 / 51.96275).epsilon(1e-9));
    CHECK(r.real() == doctest::Approx(-0.098532).epsilon(1e-5));
    CHECK(r.imag() == doctest::Approx(0.038499).epsilon(1e-4));
  }
  SUBCASE("no microwave") {
    SystemParams p;
    p.omega_mw = 0.0;
    p.gamma_c = 0.6;
    const Complex r = analytic_rho31(p, 0.01, 63.624);
    const AnalyticWidths w = analytic_widths(p);
    CHECK(r.real() == 0.0);
    CHECK(r.imag() == doctest::Approx(w.gamma12_eff.real() /
                                      (w.gamma12_eff.real() * w.gamma13_eff.real() + 6.4 * 6.4)));
  }
  SUBCASE("widths") {
    SystemParams p;
    p.gamma_12 = 0.2;
    p.gamma_c = 0.6;
    p.delta_mw = 0.3;
    p.delta_p = -1.1;
    const AnalyticWidths w = analytic_widths(p);
    CHECK(w.gamma12_eff == Complex(0.1 + 1.2, -0.3));
    CHECK(w.gamma13_eff == Complex(0.3 + 5.0, 1.1));
  }
  SUBCASE("singular denominator") {
    SystemParams p;
    p.omega_c = 0.0;
    p.gamma_12 = 0.0;
    CHECK_THROWS_AS(analytic_rho31(p, 0.0, 63.624), SingularParameter);
  }
}

TEST_CASE("closed form matches the solver for a weak probe") {
  // The closed form counts the probe detuning with the opposite sign.
  for (double g : {0.0, 0.5, 1.0, 3.0})
    for (double d = -10.0; d <= 10.0; d += 0.5) {
      SystemParams p;
      p.omega_p = 0.01;
      p.omega_mw = 0.1;
      p.gamma_c = g;
      p.delta_p = p.delta_mw = d;
      const Complex a = analytic_rho31(p, 0.0, 63.624);
      SystemParams q = p;
      q.delta_p = q.delta_mw = -d;
      const Complex n = atom_steady_state(q, 0.0, 0.0, rb.kp, rb.kc).rho13();
      CAPTURE(g);
      CAPTURE(d);
      CHECK(std::abs(a - n) < 0.02 * std::abs(a));
    }
}

TEST_CASE("closed-form transmission") {
  SUBCASE("beer-lambert without a microwave") {
    SystemParams p;
    p.omega_mw = 0.0;
    p.gamma_c = 0.8;
    const CellGeometry cell;
    const AnalyticWidths w = analytic_widths(p);
    const Complex alpha = p.eta * w.gamma12_eff / (w.gamma12_eff * w.gamma13_eff + 6.4 * 6.4);
    const Complex out = analytic_transmission(p, cell);
    CHECK(std::abs(out - std::exp(-alpha * cell.length) * p.omega_p) < 1e-15);
    CHECK(std::abs(out) < std::abs(p.omega_p));
  }
  SUBCASE("decoupled") {
    SystemParams p;
    p.eta = 0.0;
    CHECK(analytic_transmission(p, CellGeometry{}) == p.omega_p);
  }
  SUBCASE("unit transmission at the closed-form threshold") {
    for (double z0 : {0.0, -0.025}) {
      SystemParams p;
      p.gamma_c = analytic_threshold(0.8, 6.4, 1.0);
      CellGeometry cell;
      cell.z0 = z0;
      CHECK(std::abs(analytic_transmission(p, cell)) == doctest::Approx(1.0).epsilon(0.02));
    }
  }
  SUBCASE("root of the closed form lies near the threshold formula") {
    SystemParams p;
    auto excess = [&](double g) {
      p.gamma_c = g;
      return std::abs(analytic_transmission(p, CellGeometry{})) - 1.0;
    };
    double lo = 0.5, hi = 3.0;
    REQUIRE(excess(lo) > 0.0);
    REQUIRE(excess(hi) < 0.0);
    for (int i = 0; i < 60; ++i) {
      const double mid = 0.5 * (lo + hi);
      (excess(mid) > 0.0 ? lo : hi) = mid;
    }
    CHECK(lo == doctest::Approx(analytic_threshold(0.8, 6.4, 1.0)).epsilon(0.05));
  }
}

TEST_CASE("threshold formula") {
  CHECK(std::abs(analytic_threshold(0.8, 6.4, 1.0) - 1.6297) < 1e-4);
  CHECK(analytic_threshold(0.0, 6.4, 1.0) == 0.0);
  CHECK(analytic_threshold(1.6, 6.4, 1.0) == doctest::Approx(2.0 * analytic_threshold(0.8, 6.4, 1.0)));
  CHECK_THROWS_AS(analytic_threshold(0.8, 6.4, 0.0), SingularParameter);
  CHECK_THROWS_AS(analytic_threshold(0.8, 6.4, -1.0), InvalidParameter);
}

TEST_CASE("propagation agrees with the closed form in its regime") {
  // Weak probe and weak microwave keep the ground state close to |1>.
  for (double g : {0.5, 1.0, 2.0, 3.0}) {
    SystemParams p;
    p.omega_p = 0.1;
    p.omega_mw = 0.1;
    p.gamma_c = g;
    const double numeric = propagate(p, cold, rb, CellGeometry{}).delta_i;
    const double closed = std::norm(analytic_transmission(p, CellGeometry{})) - 0.01;
    CAPTURE(g);
    CHECK(std::abs(numeric - closed) < 0.05 * std::abs(closed));
  }
}
