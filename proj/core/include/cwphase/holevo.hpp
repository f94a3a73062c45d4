#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace cwphase {

/// Streaming sums for the steady-state Holevo variance. Mergeable: merge() is
/// associative and commutative.
struct HolevoAccumulator {
  std::complex<double> sum_phasor{};  ///< sum of e^{i(phi - phi_hat)}
  double sum_sharpness = 0.0;         ///< sum of |<e^{i phi}>_P| (filter schemes)
  std::uint64_t count = 0;
  std::uint64_t sharpness_count = 0;

  void add(double error) {
    sum_phasor += std::polar(1.0, error);
    ++count;
  }
  void add(double error, double sharpness) {
    add(error);
    sum_sharpness += sharpness;
    ++sharpness_count;
  }
  HolevoAccumulator& merge(const HolevoAccumulator& other);
  bool has_sharpness() const { return sharpness_count > 0; }
};

/// |<e^{i(phi - phi_hat)}>|^{-2} - 1; +infinity if the mean phasor vanishes.
/// Throws ConfigError on an empty accumulator.
double holevo_from_errors(const HolevoAccumulator& acc);

/// <|<e^{i phi}>_P|>^{-2} - 1; +infinity if the mean sharpness vanishes.
double holevo_from_sharpness(const HolevoAccumulator& acc);

/// Holevo variance of a fixed phasor-mean modulus: m^{-2} - 1.
double holevo_from_mean_modulus(double modulus);

enum class HolevoEstimator { Errors, Sharpness };

struct BootstrapEstimate {
  double value = 0.0;   ///< estimator on all blocks
  double std_error = 0.0;  ///< bootstrap standard deviation across resamples
  std::uint64_t samples = 0;
};

/// Block bootstrap: blocks are resampled with replacement `resamples` times.
/// Deterministic given `seed`.
BootstrapEstimate bootstrap_holevo(std::span<const HolevoAccumulator> blocks,
                                   HolevoEstimator estimator, int resamples, std::uint64_t seed);

/// Two-sided z statistic for equality of two independent estimates.
double two_sample_z(const BootstrapEstimate& a, const BootstrapEstimate& b);

}  // namespace cwphase
