#include "cwphase/functionals.hpp"

#include <cmath>

#include "cwphase/errors.hpp"
#include "cwphase/measurement.hpp"

namespace cwphase {

namespace {

void check_dt(double dt) {
  if (!(dt > 0.0)) throw ConfigError("functional update needs dt > 0");
}

double safe_arg(std::complex<double> z) { return z == std::complex<double>{} ? 0.0 : wrap_angle(std::arg(z)); }

}  // namespace

WindowedFunctionals update_A(WindowedFunctionals state, std::complex<double> input, double dt) {
  check_dt(dt);
  state.A = state.A * std::exp(-state.chi * dt) + input;
  return state;
}

WindowedFunctionals update_B(WindowedFunctionals state, double lo_phase, double dt) {
  check_dt(dt);
  state.B = state.B * std::exp(-state.chi * dt) + std::polar(dt, 2.0 * lo_phase);
  return state;
}

double bw_het_estimate(const WindowedFunctionals& state) { return safe_arg(state.A); }

double bw_adaptive_estimate(const WindowedFunctionals& state) {
  return safe_arg(state.A + state.chi * state.B * std::conj(state.A));
}

}  // namespace cwphase
