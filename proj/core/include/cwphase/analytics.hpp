#pragma once

#include <string_view>

#include "cwphase/sim_params.hpp"

namespace cwphase {

/// Closed-form steady-state Holevo variances in the small/large photon-flux limits.
enum class AsymptoteClass { HeterodyneSmall, HeterodyneLarge, AdaptiveSmall, AdaptiveLarge };

/// heterodyne-small 4/(pi N), heterodyne-large 1/sqrt(2N),
/// adaptive-small 1/N, adaptive-large 1/(2 sqrt(N)). Throws ConfigError for N <= 0.
double asymptote(AsymptoteClass cls, double photon_flux);

AsymptoteClass parse_asymptote_class(std::string_view name);
std::string_view to_string(AsymptoteClass cls);

/// Limits of V_heterodyne / V_adaptive.
inline constexpr double kSmallFluxRatio = 4.0 / kPi;
inline constexpr double kLargeFluxRatio = 1.41421356237309504880;

/// Posterior variance of the linearised (Gaussian) heterodyne filter started
/// from a flat prior:
///   sigma^2(t) = (2N)^{-1/2} (e^x + 1)/(e^x - 1),  x = 2 sqrt(2) |alpha|^2 t / sqrt(N).
/// Meaningful for N >> 1. Throws ConfigError for t <= 0.
double gaussian_sigma2(double t, const SimParams& params);

/// Large-t limit of gaussian_sigma2: 1/sqrt(2N).
double gaussian_sigma2_limit(const SimParams& params);

/// Quoted steady-state variance when chi = 2 sqrt(kappa) a for a lower bound
/// a <= |alpha|:  2 sqrt(kappa) a / (8 |alpha|^2) + sqrt(kappa) / (2a).
/// Throws ConfigError unless 0 < a <= |alpha|.
double mismatch_variance(double a, const SimParams& params);

/// Linearised steady-state error variance of the loop dPhi = g I_r dt locked on
/// the phase quadrature: (kappa + g^2) / (4 |alpha| g).
double linearized_feedback_variance(double gain, const SimParams& params);

/// Success probabilities for telling |0> + gamma e^{+i phi}|1> from
/// |0> + gamma e^{-i phi}|1> (equal priors), computed by quadrature over the
/// outcome densities with the optimal sign decision.
struct DiscriminationResult {
  double p_y = 0.5;          ///< Y-quadrature (homodyne at Phi = pi/2) measurement
  double p_canonical = 0.5;  ///< canonical phase measurement
};
DiscriminationResult discrimination_probs(double gamma, double phi);

/// First-order coefficients: p = 1/2 + slope * gamma |sin phi| + O(gamma^2),
/// each obtained by quadrature of the linearised outcome density.
struct DiscriminationSlopes {
  double y_quadrature = 0.0;
  double canonical = 0.0;
};
DiscriminationSlopes discrimination_slopes();

/// Steady-state window: t0 = max(20/kappa, 20/(|alpha| sqrt(kappa)), 10/chi),
/// t_f = horizon. Throws ConfigError when horizon < 2 t0.
struct SteadyWindow {
  double t0 = 0.0;
  double t_final = 0.0;
};
double steady_start(const SimParams& params);
SteadyWindow steady_window(const SimParams& params);

}  // namespace cwphase
