#pragma once

#include <cmath>

#include "cwphase/rng.hpp"
#include "cwphase/sim_params.hpp"

namespace cwphase {

/// Unwrapped beam phase. Never reduced mod 2pi; metrics work with phasors.
struct TruePhase {
  double phi = 0.0;
  double t = 0.0;
};

/// One Euler-Maruyama step of dphi = sqrt(kappa) dW.
inline TruePhase evolve_true_phase(TruePhase state, const SimParams& params, RngStream& rng) {
  state.phi += std::sqrt(params.kappa) * wiener_real(rng, params.dt);
  state.t += params.dt;
  return state;
}

}  // namespace cwphase
