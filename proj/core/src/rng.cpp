#include "cwphase/rng.hpp"

#include <cmath>

#include "cwphase/errors.hpp"

namespace cwphase {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream_index) {
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq seq{lo(seed), hi(seed), lo(stream_index), hi(stream_index), 0x9e3779b9u};
  return std::mt19937_64(seq);
}

void require_positive_dt(double dt) {
  if (!(dt > 0.0)) throw ConfigError("Wiener increment needs dt > 0");
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_index)
    : seed_(seed), stream_index_(stream_index), engine_(make_engine(seed, stream_index)) {}

double wiener_real(RngStream& rng, double dt) {
  require_positive_dt(dt);
  return std::sqrt(dt) * rng.normal();
}

std::complex<double> wiener_complex(RngStream& rng, double dt) {
  require_positive_dt(dt);
  const double scale = std::sqrt(0.5 * dt);
  const double re = rng.normal();
  const double im = rng.normal();
  return {scale * re, scale * im};
}

}  // namespace cwphase
