#include "cwphase/sim_params.hpp"

#include <cmath>
#include <string>

#include "cwphase/errors.hpp"

namespace cwphase {

void SimParams::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError("SimParams: " + msg); };
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) fail("kappa must be finite and >= 0");
  if (!(alpha_mag >= 0.0) || !std::isfinite(alpha_mag)) fail("alpha_mag must be finite and >= 0");
  if (!(eta > 0.0 && eta <= 1.0)) fail("eta must lie in (0, 1]");
  if (!(dt > 0.0) || !std::isfinite(dt)) fail("dt must be finite and > 0");
  if (n_modes < 1) fail("n_modes must be >= 1");
  if (!(burn_in >= 0.0)) fail("burn_in must be >= 0");
  if (!(horizon > burn_in) || !std::isfinite(horizon)) fail("horizon must be finite and > burn_in");
  if (chi && !(*chi > 0.0 && std::isfinite(*chi))) fail("chi must be finite and > 0");
}

void SimParams::validate_canonical() const {
  validate();
  const double strength = 2.0 * alpha_mag * std::sqrt(dt);
  if (!(strength < 1.0)) {
    throw ConfigError("canonical sampling needs 2|alpha|sqrt(dt) < 1, i.e. dt < " +
                      std::to_string(1.0 / (4.0 * alpha_mag * alpha_mag)) +
                      " (got dt = " + std::to_string(dt) + ")");
  }
}

double SimParams::photon_flux() const {
  if (kappa <= 0.0) return alpha_mag > 0.0 ? INFINITY : 0.0;
  return alpha_mag * alpha_mag / kappa;
}

std::uint64_t SimParams::total_steps() const {
  return static_cast<std::uint64_t>(std::llround(horizon / dt));
}

double window_rate(const SimParams& params) {
  if (params.chi) return *params.chi;
  const double chi = 2.0 * params.alpha_mag * std::sqrt(params.kappa);
  if (chi > 0.0) return chi;
  return params.kappa > 0.0 ? params.kappa : 1.0;
}

double feedback_gain(const SimParams& params) {
  if (params.chi && params.alpha_mag > 0.0) return *params.chi / (2.0 * params.alpha_mag);
  return std::sqrt(params.kappa);
}

}  // namespace cwphase
