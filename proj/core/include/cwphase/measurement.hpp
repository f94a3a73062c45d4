#pragma once

#include <complex>

#include "cwphase/rng.hpp"
#include "cwphase/sim_params.hpp"

namespace cwphase {

/// Homodyne photocurrent integrated over one step (I_r dt).
struct HomodyneSample {
  double i_r_dt = 0.0;
};

/// Complex heterodyne current integrated over one step (I_c dt).
struct HeterodyneSample {
  std::complex<double> i_c_dt{};
};

/// Outcome of an infinitesimal canonical phase measurement, in [-pi, pi).
struct CanonicalSample {
  double theta = 0.0;
};

/// I_r dt = 2 eta |alpha| cos(phi - Phi) dt + sqrt(eta) dW.
HomodyneSample sample_homodyne(double phi, double lo_phase, const SimParams& params, RngStream& rng);

/// I_c dt = |alpha| e^{i phi} dt + dW_c.
HeterodyneSample sample_heterodyne(double phi, const SimParams& params, RngStream& rng);

/// Draws theta from (1/2pi)(1 + 2|alpha|sqrt(dt) cos(theta - phi)) by rejection
/// against a uniform proposal. Throws ConfigError when 2|alpha|sqrt(dt) >= 1.
CanonicalSample sample_canonical(double phi, const SimParams& params, RngStream& rng);

/// Wraps an angle into [-pi, pi).
double wrap_angle(double x);

}  // namespace cwphase
