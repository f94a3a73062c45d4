#pragma once

#include <complex>
#include <iosfwd>
#include <span>
#include <vector>

#include "cwphase/measurement.hpp"
#include "cwphase/sim_params.hpp"

namespace cwphase {

/// Conditional phase density P(phi) = sum_{|j|<=J} b_j e^{i j phi}.
///
/// Invariants after every public operation: b_0 = 1/(2pi), b_{-j} = conj(b_j),
/// and 2pi|b_1| <= 1 + 1e-9. With this sign convention <e^{i phi}>_P = 2pi b_{-1}.
class FourierFilterState {
 public:
  using complex = std::complex<double>;

  /// Uniform density with J modes. Throws ConfigError for J < 1.
  explicit FourierFilterState(int modes);

  int modes() const { return modes_; }

  /// b_j for |j| <= J, zero outside the truncation.
  complex coeff(int j) const;
  void set_coeff(int j, complex value);  ///< sets b_j and b_{-j} = conj(value)

  /// Coefficients ordered j = -J..J.
  std::span<const complex> coefficients() const { return b_; }

  /// <e^{i phi}>_P.
  complex mean_phasor() const { return kTwoPi * std::conj(b_[modes_ + 1]); }

  /// Point evaluation of the truncated series.
  double density(double phi) const;

  /// Rescale so b_0 = 1/(2pi) and restore conjugate symmetry by averaging b_j
  /// with conj(b_{-j}).
  void renormalize();

  /// Wrapped normal with the given mean and variance, truncated at J modes.
  static FourierFilterState wrapped_normal(int modes, double mean, double variance);

 private:
  friend class FourierStepper;
  int modes_;
  std::vector<complex> b_;  // index j + J
};

struct PhaseEstimate {
  double phi_hat = 0.0;    ///< arg <e^{i phi}>_P in [-pi, pi); 0 for a uniform state
  double sharpness = 0.0;  ///< |<e^{i phi}>_P|
};

/// Uniform state with J modes.
FourierFilterState init_uniform(int modes);

/// Default truncation for photon flux N: max(16, ceil(6 (2N)^{1/4})).
int default_modes(double photon_flux);

/// One Kushner-Stratonovich step for a heterodyne record. Measurement terms are
/// explicit Euler with innovation zeta dt = I_c dt - |alpha| <e^{i phi}> dt; the
/// -kappa j^2/2 damping is applied exactly through e^{-kappa j^2 dt/2}.
/// Throws NumericalError if the sharpness bound breaks.
FourierFilterState ks_step_heterodyne(FourierFilterState state, const HeterodyneSample& meas,
                                      const SimParams& params);

/// One KS step for a homodyne record at local-oscillator phase `lo_phase`.
/// The filter assumes eta = 1 regardless of params.eta.
FourierFilterState ks_step_homodyne(FourierFilterState state, const HomodyneSample& meas,
                                    double lo_phase, const SimParams& params);

/// Validation path: linear (unnormalised) Zakai update, explicit division by the
/// updated total mass, then the same diffusion as the KS step. Agrees with the
/// KS step in conditional mean to O(dt^2).
FourierFilterState zakai_step_then_normalize(FourierFilterState state,
                                             const HeterodyneSample& meas,
                                             const SimParams& params);
FourierFilterState zakai_step_then_normalize(FourierFilterState state, const HomodyneSample& meas,
                                             double lo_phase, const SimParams& params);

/// Drive for the heterodyne filter equivalent to a canonical outcome theta.
inline HeterodyneSample canonical_drive(const CanonicalSample& sample, double dt) {
  return {std::polar(std::sqrt(dt), sample.theta)};
}

PhaseEstimate estimate(const FourierFilterState& state);

/// Debug dump: header `j,re,im` followed by one row per j = -J..J.
void write_coefficients_csv(std::ostream& os, const FourierFilterState& state);

}  // namespace cwphase
