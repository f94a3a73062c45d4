#include <doctest.h>

#include <cmath>

#include "cwphase/errors.hpp"
#include "cwphase/functionals.hpp"
#include "cwphase/measurement.hpp"

using namespace cwphase;

TEST_SUITE("functional_estimators") {
  TEST_CASE("A is an exponentially weighted sum of its inputs") {
    WindowedFunctionals f{.A = {}, .B = {}, .chi = 2.0};
    const double dt = 0.1;
    const std::complex<double> inputs[] = {{1, 0}, {0, 1}, {-0.5, 0.25}};
    for (auto in : inputs) f = update_A(f, in, dt);
    const double d = std::exp(-2.0 * dt);
    const auto expected = inputs[0] * d * d + inputs[1] * d + inputs[2];
    CHECK(std::abs(f.A - expected) < 1e-15);
  }

  TEST_CASE("constant Phi: B tends to e^{2i Phi} / chi") {
    const double chi = 3.0, dt = 1e-4, lo = 0.6;
    WindowedFunctionals f{.A = {}, .B = {}, .chi = chi};
    for (int k = 0; k < 200000; ++k) f = update_B(f, lo, dt);  // 60 windows
    // The discrete geometric sum converges to dt / (1 - e^{-chi dt}) = (1/chi)(1 + O(chi dt)).
    const auto exact = std::polar(dt / (1.0 - std::exp(-chi * dt)), 2 * lo);
    CHECK(std::abs(f.B - exact) < 1e-12);
    CHECK(std::abs(f.B - std::polar(1.0 / chi, 2 * lo)) < chi * dt / chi);
  }

  TEST_CASE("Phi alternating by pi/2 cancels B") {
    const double chi = 1.0, dt = 1e-3;
    WindowedFunctionals f{.A = {}, .B = {}, .chi = chi};
    for (int k = 0; k < 100000; ++k) f = update_B(f, (k % 2) * kPi / 2, dt);
    CHECK(std::abs(f.B) < 2 * dt);
  }

  TEST_CASE("|B| never exceeds the window mass") {
    const double chi = 5.0, dt = 1e-3;
    const double bound = dt / (1.0 - std::exp(-chi * dt));
    WindowedFunctionals f{.A = {}, .B = {}, .chi = chi};
    RngStream rng(3, 0);
    for (int k = 0; k < 20000; ++k) {
      f = update_B(f, kTwoPi * rng.uniform(), dt);
      REQUIRE(std::abs(f.B) <= bound * (1 + 1e-12));
    }
  }

  TEST_CASE("estimators and their zero conventions") {
    WindowedFunctionals f{.A = {}, .B = {}, .chi = 1.0};
    CHECK(bw_het_estimate(f) == 0.0);
    CHECK(bw_adaptive_estimate(f) == 0.0);
    f.A = std::polar(2.0, 1.2);
    CHECK(bw_het_estimate(f) == doctest::Approx(1.2));
    CHECK(bw_adaptive_estimate(f) == doctest::Approx(1.2));  // B = 0 reduces to arg A
    f.A = 3.0;
    f.B = 0.5;
    CHECK(bw_adaptive_estimate(f) == 0.0);
    // A + chi B A* vanishes: A = i, chi B = 1 gives i + (-i) = 0.
    f.A = {0.0, 1.0};
    f.B = 1.0;
    CHECK(bw_adaptive_estimate(f) == 0.0);
  }

  TEST_CASE("phase equivariance") {
    const double delta = 0.9;
    WindowedFunctionals a{.A = {}, .B = {}, .chi = 2.0}, b = a;
    RngStream rng(8, 0);
    for (int k = 0; k < 500; ++k) {
      const std::complex<double> in{rng.normal(), rng.normal()};
      const double lo = rng.uniform() * kTwoPi;
      a = update_B(update_A(a, in, 0.01), lo, 0.01);
      b = update_B(update_A(b, in * std::polar(1.0, delta), 0.01), lo + delta, 0.01);
    }
    CHECK(wrap_angle(bw_het_estimate(b) - bw_het_estimate(a) - delta) ==
          doctest::Approx(0.0).scale(1).epsilon(1e-12));
    CHECK(wrap_angle(bw_adaptive_estimate(b) - bw_adaptive_estimate(a) - delta) ==
          doctest::Approx(0.0).scale(1).epsilon(1e-12));
  }

  TEST_CASE("non-positive dt is rejected") {
    WindowedFunctionals f;
    CHECK_THROWS_AS(update_A(f, 1.0, 0.0), ConfigError);
    CHECK_THROWS_AS(update_B(f, 0.0, -1.0), ConfigError);
  }
}
