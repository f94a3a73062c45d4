#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace cwphase {

/// Deterministic random stream addressed by (seed, stream_index).
///
/// Identical addresses replay bit-identical sequences; distinct stream indices
/// get unrelated engine states, so trajectories can run on any worker in any
/// order without changing results.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_index);

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_index() const { return stream_index_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_index_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// Real Wiener increment: N(0, dt). Throws ConfigError unless dt > 0.
double wiener_real(RngStream& rng, double dt);

/// Complex Wiener increment with <dW dW*> = dt and <dW dW> = 0.
std::complex<double> wiener_complex(RngStream& rng, double dt);

}  // namespace cwphase
