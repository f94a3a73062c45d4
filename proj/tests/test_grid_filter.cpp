#include <doctest.h>

#include <cmath>
#include <numeric>

#include "cwphase/errors.hpp"
#include "cwphase/grid_filter.hpp"
#include "cwphase/true_phase.hpp"

using namespace cwphase;

namespace {

double mass(const GridFilterState& g) {
  return std::accumulate(g.p.begin(), g.p.end(), 0.0) * g.spacing();
}

}  // namespace

TEST_SUITE("ks_filter") {
  TEST_CASE("grid: uniform prior and flat likelihood stay uniform") {
    SimParams p;
    const auto g = grid_bayes_step(uniform_grid(128), std::vector<double>(128, -3.0), p);
    for (double v : g.p) CHECK(v == doctest::Approx(1.0 / kTwoPi));
    CHECK(mass(g) == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("grid: diffusion multiplies the first circular moment by e^{-kappa dt / 2}") {
    // Equivalent to the variance of a narrow peak growing by kappa dt.
    const std::size_t M = 512;
    const auto prior = grid_from_fourier(FourierFilterState::wrapped_normal(64, 0.4, 0.05), M);
    SimParams p;
    p.kappa = 1.0;
    p.dt = 0.02;
    const auto post = grid_bayes_step(prior, std::vector<double>(M, 0.0), p);
    const double before = estimate(prior).sharpness;
    const double after = estimate(post).sharpness;
    CHECK(after / before == doctest::Approx(std::exp(-0.5 * p.kappa * p.dt)).epsilon(1e-9));
    CHECK(estimate(post).phi_hat == doctest::Approx(0.4).epsilon(1e-9));
    // Circular variance -2 ln R grows by exactly kappa dt.
    CHECK(-2 * std::log(after) + 2 * std::log(before) == doctest::Approx(p.kappa * p.dt));
  }

  TEST_CASE("grid: zero diffusion is the identity") {
    GridDiffusion none(64, 0.0);
    std::vector<double> v(64);
    std::iota(v.begin(), v.end(), 1.0);
    const auto copy = v;
    none.apply(v);
    CHECK(v == copy);
  }

  TEST_CASE("grid: likelihood weights and log-likelihoods are interchangeable") {
    SimParams p;
    std::vector<double> w(32), logw(32);
    for (int m = 0; m < 32; ++m) {
      w[m] = 1.0 + 0.5 * std::sin(m);
      logw[m] = std::log(w[m]);
    }
    const auto a = grid_bayes_step_weights(uniform_grid(32), w, p);
    const auto b = grid_bayes_step(uniform_grid(32), logw, p);
    for (int m = 0; m < 32; ++m) CHECK(a.p[m] == doctest::Approx(b.p[m]).epsilon(1e-13));
    w[3] = 0.0;
    CHECK_THROWS_AS(grid_bayes_step_weights(uniform_grid(32), w, p), ConfigError);
  }

  TEST_CASE("grid: extreme log-likelihoods do not underflow") {
    SimParams p;
    std::vector<double> logw(64, -1e6);
    logw[10] = -1e6 + 5.0;
    const auto g = grid_bayes_step(uniform_grid(64), logw, p);
    CHECK(mass(g) == doctest::Approx(1.0));
  }

  TEST_CASE("grid: mismatched sizes are rejected") {
    SimParams p;
    CHECK_THROWS_AS(grid_bayes_step(uniform_grid(16), std::vector<double>(8, 0.0), p), ConfigError);
    CHECK_THROWS_AS(uniform_grid(0), ConfigError);
  }

  TEST_CASE("grid: heterodyne updates at fixed phi = 0, N = 100 settle near 1/sqrt(2N)") {
    const std::size_t M = 512;
    SimParams p;
    p.alpha_mag = 10.0;
    p.dt = 1e-3;
    const GridDiffusion diffusion(M, p.kappa * p.dt);
    RngStream rng(5, 0);
    auto g = uniform_grid(M);
    double sum_sharp = 0;
    int count = 0;
    for (int k = 0; k < 4000; ++k) {  // t = 4, several relaxation times 1/(2 sqrt 2 |alpha|)
      const auto m = sample_heterodyne(0.0, p, rng);
      g = grid_bayes_step(std::move(g), heterodyne_log_likelihood(M, m, p), diffusion);
      if (k >= 2000) {
        sum_sharp += estimate(g).sharpness;
        ++count;
      }
    }
    CHECK(std::abs(estimate(g).phi_hat) < 0.3);
    const double v = std::pow(sum_sharp / count, -2.0) - 1.0;
    CHECK(v == doctest::Approx(1.0 / std::sqrt(200.0)).epsilon(0.15));
  }

  TEST_CASE("grid: canonical likelihood has the sampling density's shape") {
    SimParams p;
    p.alpha_mag = 2.0;
    p.dt = 0.01;
    const auto ll = canonical_log_likelihood(8, {0.0}, p);
    const auto g = uniform_grid(8);
    for (std::size_t m = 0; m < 8; ++m) {
      CHECK(std::exp(ll[m]) == doctest::Approx(1.0 + 0.4 * std::cos(g.node(m))));
    }
  }
}
