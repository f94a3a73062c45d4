#include "cwphase/measurement.hpp"

#include <cmath>
#include <string>

#include "cwphase/errors.hpp"

namespace cwphase {

double wrap_angle(double x) {
  double y = std::fmod(x + kPi, kTwoPi);
  if (y < 0.0) y += kTwoPi;
  y -= kPi;
  // fmod rounding can land exactly on +pi for inputs just below an odd multiple.
  if (y >= kPi) y -= kTwoPi;
  return y;
}

HomodyneSample sample_homodyne(double phi, double lo_phase, const SimParams& params,
                               RngStream& rng) {
  const double signal = 2.0 * params.eta * params.alpha_mag * std::cos(phi - lo_phase) * params.dt;
  return {signal + std::sqrt(params.eta) * wiener_real(rng, params.dt)};
}

HeterodyneSample sample_heterodyne(double phi, const SimParams& params, RngStream& rng) {
  const std::complex<double> signal = std::polar(params.alpha_mag * params.dt, phi);
  return {signal + wiener_complex(rng, params.dt)};
}

CanonicalSample sample_canonical(double phi, const SimParams& params, RngStream& rng) {
  const double strength = 2.0 * params.alpha_mag * std::sqrt(params.dt);
  if (!(strength < 1.0)) {
    throw ConfigError("canonical density is not positive: need dt < 1/(4|alpha|^2) = " +
                      std::to_string(1.0 / (4.0 * params.alpha_mag * params.alpha_mag)));
  }
  const double bound = 1.0 + strength;
  for (;;) {
    const double theta = -kPi + kTwoPi * rng.uniform();
    if (rng.uniform() * bound < 1.0 + strength * std::cos(theta - phi)) return {theta};
  }
}

}  // namespace cwphase
