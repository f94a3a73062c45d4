#pragma once

#include <cstdint>
#include <optional>

namespace cwphase {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Physical and numerical configuration of one simulated beam.
///
/// Times are in seconds (or in coherence times 1/kappa when kappa = 1, which is
/// what the experiment layer uses). The photon flux N = alpha_mag^2 / kappa is
/// the only physical knob the steady-state results depend on.
struct SimParams {
  double kappa = 1.0;      ///< phase diffusion strength (linewidth), rad^2/s
  double alpha_mag = 1.0;  ///< coherent amplitude |alpha|, s^-1/2
  double eta = 1.0;        ///< detector efficiency in (0, 1]
  double dt = 1e-3;        ///< integration step, s
  int n_modes = 16;        ///< Fourier truncation J (|j| <= J)
  std::uint64_t seed = 1;
  double burn_in = 20.0;   ///< start of the steady-state window, s
  double horizon = 100.0;  ///< total simulated time, s

  /// Window rate of the A/B functionals. Unset means 2 |alpha| sqrt(kappa).
  std::optional<double> chi;

  /// Throws ConfigError if any field invariant is broken.
  void validate() const;

  /// Additionally checks 2 |alpha| sqrt(dt) < 1, needed by canonical sampling.
  void validate_canonical() const;

  double photon_flux() const;
  std::uint64_t total_steps() const;
};

/// The functional window rate chi actually used.
///
/// Explicit `chi` wins; otherwise 2|alpha|sqrt(kappa). For a vacuum beam that
/// default is zero, so we fall back to kappa (or 1 when kappa is also zero) to
/// keep chi > 0.
double window_rate(const SimParams& params);

/// Feedback gain g in dPhi = g * I_r dt for the simple and BW adaptive schemes.
/// sqrt(kappa) at the default chi; chi / (2|alpha|) when chi is overridden.
double feedback_gain(const SimParams& params);

}  // namespace cwphase
