#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "cwphase/errors.hpp"
#include "cwphase/holevo.hpp"
#include "cwphase/sim_params.hpp"

using namespace cwphase;

TEST_SUITE("metrics_analytics") {
  TEST_CASE("Holevo variance of known error distributions") {
    HolevoAccumulator exact;
    for (int i = 0; i < 10; ++i) exact.add(0.0);
    CHECK(holevo_from_errors(exact) == 0.0);

    // Errors +-x with equal weight: |<e^{i e}>| = cos x.
    HolevoAccumulator pm;
    pm.add(0.3);
    pm.add(-0.3);
    CHECK(holevo_from_errors(pm) == doctest::Approx(1.0 / (std::cos(0.3) * std::cos(0.3)) - 1.0));

    // Wrapping does not matter: errors 2 pi apart are identical.
    HolevoAccumulator wrapped;
    wrapped.add(0.3 + kTwoPi);
    wrapped.add(-0.3 - 2 * kTwoPi);
    CHECK(holevo_from_errors(wrapped) == doctest::Approx(holevo_from_errors(pm)));

    // Opposite errors cancel up to rounding of the phasor sum.
    HolevoAccumulator flat;
    flat.add(0.0);
    flat.add(kPi);
    CHECK(holevo_from_errors(flat) > 1e25);
  }

  TEST_CASE("Gaussian errors: V = e^{sigma^2} - 1") {
    std::mt19937_64 gen(4);
    std::normal_distribution<double> nd(0.0, 0.5);
    HolevoAccumulator acc;
    const int n = 400000;
    for (int i = 0; i < n; ++i) acc.add(nd(gen));
    CHECK(holevo_from_errors(acc) == doctest::Approx(std::exp(0.25) - 1.0).epsilon(0.01));
  }

  TEST_CASE("sharpness estimator") {
    HolevoAccumulator acc;
    acc.add(0.1, 0.5);
    acc.add(-0.2, 0.7);
    CHECK(acc.has_sharpness());
    CHECK(holevo_from_sharpness(acc) == doctest::Approx(1.0 / 0.36 - 1.0));
    CHECK(holevo_from_mean_modulus(1.0) == 0.0);
    CHECK(std::isinf(holevo_from_mean_modulus(0.0)));
  }

  TEST_CASE("empty accumulators are configuration errors") {
    HolevoAccumulator empty;
    CHECK_THROWS_AS(holevo_from_errors(empty), ConfigError);
    CHECK_THROWS_AS(holevo_from_sharpness(empty), ConfigError);
    CHECK_THROWS_AS(bootstrap_holevo({}, HolevoEstimator::Errors, 10, 1), ConfigError);
  }

  TEST_CASE("merge is associative and commutative") {
    HolevoAccumulator a, b, c;
    a.add(0.1, 0.9);
    b.add(-1.0, 0.2);
    b.add(2.0, 0.4);
    c.add(0.5, 0.6);
    HolevoAccumulator ab_c = a;
    ab_c.merge(b).merge(c);
    HolevoAccumulator bc = b;
    bc.merge(c);
    HolevoAccumulator a_bc = a;
    a_bc.merge(bc);
    HolevoAccumulator cba = c;
    cba.merge(b).merge(a);
    for (const auto* x : {&a_bc, &cba}) {
      CHECK(x->count == ab_c.count);
      CHECK(x->sharpness_count == ab_c.sharpness_count);
      CHECK(std::abs(x->sum_phasor - ab_c.sum_phasor) < 1e-15);
      CHECK(x->sum_sharpness == doctest::Approx(ab_c.sum_sharpness));
    }
  }

  TEST_CASE("block bootstrap: deterministic, and its error matches the spread across blocks") {
    std::mt19937_64 gen(9);
    std::normal_distribution<double> nd(0.0, 0.7);
    std::vector<HolevoAccumulator> blocks(200);
    for (auto& b : blocks) {
      for (int i = 0; i < 50; ++i) b.add(nd(gen));
    }
    const auto r1 = bootstrap_holevo(blocks, HolevoEstimator::Errors, 400, 77);
    const auto r2 = bootstrap_holevo(blocks, HolevoEstimator::Errors, 400, 77);
    CHECK(r1.value == r2.value);
    CHECK(r1.std_error == r2.std_error);
    CHECK(r1.samples == 10000);

    // Delta-method oracle: V = m^{-2} - 1, se(V) = 2 m^{-3} se(m), se(m) from block means.
    std::complex<double> total{};
    for (const auto& b : blocks) total += b.sum_phasor;
    const auto mean_phasor = total / 10000.0;
    const double m = std::abs(mean_phasor);
    const auto dir = mean_phasor / m;
    double s2 = 0;
    for (const auto& b : blocks) {
      const double proj = (b.sum_phasor / 50.0 * std::conj(dir)).real() - m;
      s2 += proj * proj;
    }
    const double se_m = std::sqrt(s2 / 199.0 / 200.0);
    CHECK(r1.std_error == doctest::Approx(2.0 * se_m / (m * m * m)).epsilon(0.15));
  }

  TEST_CASE("a single block has no bootstrap spread") {
    HolevoAccumulator one;
    one.add(0.2);
    const HolevoAccumulator blocks[] = {one};
    CHECK(std::isinf(bootstrap_holevo(blocks, HolevoEstimator::Errors, 100, 1).std_error));
  }

  TEST_CASE("two-sample z") {
    CHECK(two_sample_z({1.0, 0.3, 0}, {0.5, 0.4, 0}) == doctest::Approx(1.0));
    CHECK(two_sample_z({1.0, 0.0, 0}, {1.0, 0.0, 0}) == 0.0);
    CHECK(std::isinf(two_sample_z({1.0, 0.0, 0}, {2.0, 0.0, 0})));
  }
}
