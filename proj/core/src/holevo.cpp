#include "cwphase/holevo.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "cwphase/errors.hpp"

namespace cwphase {

HolevoAccumulator& HolevoAccumulator::merge(const HolevoAccumulator& other) {
  sum_phasor += other.sum_phasor;
  sum_sharpness += other.sum_sharpness;
  count += other.count;
  sharpness_count += other.sharpness_count;
  return *this;
}

double holevo_from_mean_modulus(double modulus) {
  if (modulus <= 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / (modulus * modulus) - 1.0;
}

double holevo_from_errors(const HolevoAccumulator& acc) {
  if (acc.count == 0) throw ConfigError("Holevo variance of an empty accumulator");
  return holevo_from_mean_modulus(std::abs(acc.sum_phasor) / static_cast<double>(acc.count));
}

double holevo_from_sharpness(const HolevoAccumulator& acc) {
  if (acc.sharpness_count == 0) throw ConfigError("no sharpness samples in accumulator");
  return holevo_from_mean_modulus(acc.sum_sharpness / static_cast<double>(acc.sharpness_count));
}

namespace {

double evaluate(const HolevoAccumulator& acc, HolevoEstimator estimator) {
  return estimator == HolevoEstimator::Errors ? holevo_from_errors(acc)
                                              : holevo_from_sharpness(acc);
}

}  // namespace

BootstrapEstimate bootstrap_holevo(std::span<const HolevoAccumulator> blocks,
                                   HolevoEstimator estimator, int resamples, std::uint64_t seed) {
  if (blocks.empty()) throw ConfigError("bootstrap needs at least one block");
  HolevoAccumulator total;
  for (const auto& b : blocks) total.merge(b);
  BootstrapEstimate out;
  out.value = evaluate(total, estimator);
  out.samples = total.count;
  if (resamples < 2 || blocks.size() < 2) {
    out.std_error = std::numeric_limits<double>::infinity();
    return out;
  }
  std::uniform_int_distribution<std::size_t> pick(0, blocks.size() - 1);
  std::mt19937_64 engine(seed ^ 0x5bd1e995u);
  double mean = 0.0;
  double m2 = 0.0;
  int finite = 0;
  for (int r = 0; r < resamples; ++r) {
    HolevoAccumulator acc;
    for (std::size_t i = 0; i < blocks.size(); ++i) acc.merge(blocks[pick(engine)]);
    const double v = evaluate(acc, estimator);
    if (!std::isfinite(v)) continue;
    ++finite;
    const double delta = v - mean;
    mean += delta / finite;
    m2 += delta * (v - mean);
  }
  out.std_error = finite > 1 ? std::sqrt(m2 / (finite - 1)) : std::numeric_limits<double>::infinity();
  return out;
}

double two_sample_z(const BootstrapEstimate& a, const BootstrapEstimate& b) {
  const double se = std::hypot(a.std_error, b.std_error);
  if (!(se > 0.0)) return a.value == b.value ? 0.0 : std::numeric_limits<double>::infinity();
  return (a.value - b.value) / se;
}

}  // namespace cwphase
