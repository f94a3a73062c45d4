#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "cwphase/errors.hpp"
#include "cwphase/rng.hpp"
#include "cwphase/sim_params.hpp"
#include "cwphase/true_phase.hpp"

using namespace cwphase;

TEST_SUITE("stochastic_core") {
  TEST_CASE("SimParams validation names the broken field") {
    SimParams p;
    CHECK_NOTHROW(p.validate());
    auto broken = [](auto mutate) {
      SimParams q;
      mutate(q);
      return q;
    };
    CHECK_THROWS_AS(broken([](SimParams& q) { q.kappa = -1; }).validate(), ConfigError);
    CHECK_THROWS_AS(broken([](SimParams& q) { q.alpha_mag = -0.5; }).validate(), ConfigError);
    CHECK_THROWS_AS(broken([](SimParams& q) { q.eta = 0.0; }).validate(), ConfigError);
    CHECK_THROWS_AS(broken([](SimParams& q) { q.eta = 1.5; }).validate(), ConfigError);
    CHECK_THROWS_AS(broken([](SimParams& q) { q.dt = 0.0; }).validate(), ConfigError);
    CHECK_THROWS_AS(broken([](SimParams& q) { q.n_modes = 0; }).validate(), ConfigError);
    CHECK_THROWS_AS(broken([](SimParams& q) { q.horizon = q.burn_in; }).validate(), ConfigError);
    CHECK_THROWS_AS(broken([](SimParams& q) { q.chi = 0.0; }).validate(), ConfigError);
    CHECK_THROWS_WITH_AS(broken([](SimParams& q) { q.dt = -1; }).validate(),
                         doctest::Contains("dt"), ConfigError);
  }

  TEST_CASE("photon flux and step count") {
    SimParams p;
    p.alpha_mag = 3.0;
    p.kappa = 2.0;
    CHECK(p.photon_flux() == doctest::Approx(4.5));
    p.horizon = 1.0;
    p.dt = 1e-3;
    CHECK(p.total_steps() == 1000);
  }

  TEST_CASE("canonical bound") {
    SimParams p;
    p.alpha_mag = 10.0;
    p.dt = 1e-3;  // 2 alpha sqrt(dt) = 0.63
    CHECK_NOTHROW(p.validate_canonical());
    p.dt = 2.5e-3;  // exactly 1
    CHECK_THROWS_AS(p.validate_canonical(), ConfigError);
  }

  TEST_CASE("window rate and feedback gain") {
    SimParams p;
    p.alpha_mag = 2.0;
    p.kappa = 4.0;
    CHECK(window_rate(p) == doctest::Approx(8.0));
    CHECK(feedback_gain(p) == doctest::Approx(2.0));
    p.chi = 4.0;
    CHECK(window_rate(p) == doctest::Approx(4.0));
    CHECK(feedback_gain(p) == doctest::Approx(1.0));
    SimParams vacuum;
    vacuum.alpha_mag = 0.0;
    vacuum.kappa = 0.5;
    CHECK(window_rate(vacuum) == doctest::Approx(0.5));
  }

  TEST_CASE("streams are reproducible and distinct") {
    RngStream a(42, 3), b(42, 3), c(42, 4), d(43, 3);
    std::vector<double> va, vb, vc, vd;
    for (int i = 0; i < 64; ++i) {
      va.push_back(a.normal());
      vb.push_back(b.normal());
      vc.push_back(c.normal());
      vd.push_back(d.normal());
    }
    CHECK(va == vb);
    CHECK(va != vc);
    CHECK(va != vd);
  }

  TEST_CASE("neighbouring streams are uncorrelated") {
    RngStream a(7, 0), b(7, 1);
    const int n = 200000;
    double sab = 0;
    for (int i = 0; i < n; ++i) sab += a.normal() * b.normal();
    // Sample correlation of independent normals has sd 1/sqrt(n).
    CHECK(std::abs(sab / n) < 5.0 / std::sqrt(double(n)));
  }

  TEST_CASE("Wiener increment moments") {
    RngStream rng(1, 0);
    const double dt = 0.01;
    const int n = 200000;
    double s = 0, s2 = 0;
    std::complex<double> c2{};
    double cabs = 0;
    for (int i = 0; i < n; ++i) {
      const double w = wiener_real(rng, dt);
      s += w;
      s2 += w * w;
      const auto z = wiener_complex(rng, dt);
      c2 += z * z;
      cabs += std::norm(z);
    }
    // var(w^2) = 2 dt^2; var(|z|^2) = dt^2; var(Re z^2) = dt^2/2.
    CHECK(std::abs(s / n) < 5 * std::sqrt(dt / n));
    CHECK(std::abs(s2 / n - dt) < 5 * std::sqrt(2.0 / n) * dt);
    CHECK(std::abs(cabs / n - dt) < 5 * dt / std::sqrt(double(n)));
    CHECK(std::abs(c2 / double(n)) < 5 * dt / std::sqrt(double(n)));
  }

  TEST_CASE("Wiener increment rejects dt <= 0 and vanishes as dt -> 0") {
    RngStream rng(1, 0);
    CHECK_THROWS_AS(wiener_real(rng, 0.0), ConfigError);
    CHECK_THROWS_AS(wiener_complex(rng, -1.0), ConfigError);
    double worst = 0;
    for (int i = 0; i < 1000; ++i) worst = std::max(worst, std::abs(wiener_real(rng, 1e-30)));
    CHECK(worst < 1e-14);
  }

  TEST_CASE("true phase diffuses with variance kappa t") {
    SimParams p;
    p.kappa = 0.7;
    p.dt = 0.01;
    const int paths = 20000, steps = 100;  // t = 1
    double s2 = 0;
    for (int k = 0; k < paths; ++k) {
      RngStream rng(11, k);
      TruePhase x{0.0, 0.0};
      for (int i = 0; i < steps; ++i) x = evolve_true_phase(x, p, rng);
      s2 += x.phi * x.phi;
    }
    const double expected = p.kappa * 1.0;
    CHECK(std::abs(s2 / paths - expected) < 5 * expected * std::sqrt(2.0 / paths));
  }

  TEST_CASE("kappa = 0 freezes the phase") {
    SimParams p;
    p.kappa = 0.0;
    RngStream rng(1, 1);
    TruePhase x{0.3, 0.0};
    for (int i = 0; i < 100; ++i) x = evolve_true_phase(x, p, rng);
    CHECK(x.phi == 0.3);
    CHECK(x.t == doctest::Approx(100 * p.dt));
  }
}
