#include "cwphase/fourier_filter.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "cwphase/errors.hpp"

namespace cwphase {

namespace {

using complex = std::complex<double>;
constexpr double kSharpnessTol = 1e-9;
constexpr double kUniformLevel = 1.0 / kTwoPi;

}  // namespace

/// Shared in-place machinery for the filter steps. Only j >= 0 is propagated;
/// negative modes are mirrored, which keeps conjugate symmetry exact.
class FourierStepper {
 public:
  // new_b_j = b_j + drive_j(b_{j-1}, b_j, b_{j+1}) for j = 0..J, with b_{J+1} = 0.
  template <typename Drive>
  static void apply(FourierFilterState& s, Drive&& drive) {
    const int J = s.modes_;
    complex* b = s.b_.data() + J;  // b[j], j in [-J, J]
    complex prev = b[-1];
    for (int j = 0; j <= J; ++j) {
      const complex cur = b[j];
      const complex next = j < J ? b[j + 1] : complex{};
      b[j] = cur + drive(j, prev, cur, next);
      prev = cur;
    }
  }

  static void diffuse(FourierFilterState& s, double kappa, double dt) {
    const int J = s.modes_;
    complex* b = s.b_.data() + J;
    for (int j = 1; j <= J; ++j) b[j] *= std::exp(-0.5 * kappa * j * j * dt);
  }

  static void scale(FourierFilterState& s, double factor) {
    const int J = s.modes_;
    complex* b = s.b_.data() + J;
    for (int j = 0; j <= J; ++j) b[j] *= factor;
  }

  // Restores b_0 = 1/(2pi) and mirrors j > 0 onto j < 0.
  static void finish(FourierFilterState& s) {
    const int J = s.modes_;
    complex* b = s.b_.data() + J;
    const double b0 = b[0].real();
    if (!(b0 > 0.0) || !std::isfinite(b0)) {
      throw NumericalError("filter normalisation lost (b_0 = " + std::to_string(b0) +
                           "); reduce dt or increase the number of modes");
    }
    const double factor = kUniformLevel / b0;
    b[0] = kUniformLevel;
    for (int j = 1; j <= J; ++j) {
      b[j] *= factor;
      b[-j] = std::conj(b[j]);
    }
    const double sharpness = kTwoPi * std::abs(b[1]);
    if (!(sharpness <= 1.0 + kSharpnessTol)) {
      throw NumericalError("filter sharpness " + std::to_string(sharpness) +
                           " exceeds 1; reduce dt or increase the number of modes");
    }
  }
};

FourierFilterState::FourierFilterState(int modes) : modes_(modes) {
  if (modes < 1) throw ConfigError("Fourier filter needs at least one mode");
  b_.assign(static_cast<std::size_t>(2 * modes + 1), complex{});
  b_[static_cast<std::size_t>(modes)] = kUniformLevel;
}

complex FourierFilterState::coeff(int j) const {
  if (j < -modes_ || j > modes_) return {};
  return b_[static_cast<std::size_t>(j + modes_)];
}

void FourierFilterState::set_coeff(int j, complex value) {
  if (j < -modes_ || j > modes_) throw ConfigError("mode index outside truncation");
  if (j == 0) {
    b_[static_cast<std::size_t>(modes_)] = value.real();
    return;
  }
  b_[static_cast<std::size_t>(j + modes_)] = value;
  b_[static_cast<std::size_t>(-j + modes_)] = std::conj(value);
}

double FourierFilterState::density(double phi) const {
  double p = b_[static_cast<std::size_t>(modes_)].real();
  for (int j = 1; j <= modes_; ++j) {
    p += 2.0 * (coeff(j) * std::polar(1.0, j * phi)).real();
  }
  return p;
}

void FourierFilterState::renormalize() {
  const int J = modes_;
  complex* b = b_.data() + J;
  for (int j = 1; j <= J; ++j) {
    const complex avg = 0.5 * (b[j] + std::conj(b[-j]));
    b[j] = avg;
    b[-j] = std::conj(avg);
  }
  const double b0 = b[0].real();
  if (!(b0 > 0.0)) throw NumericalError("cannot renormalise a state with b_0 <= 0");
  const double factor = kUniformLevel / b0;
  b[0] = kUniformLevel;
  for (int j = 1; j <= J; ++j) {
    b[j] *= factor;
    b[-j] *= factor;
  }
}

FourierFilterState FourierFilterState::wrapped_normal(int modes, double mean, double variance) {
  FourierFilterState s(modes);
  for (int j = 1; j <= modes; ++j) {
    s.set_coeff(j, kUniformLevel * std::exp(-0.5 * j * j * variance) * std::polar(1.0, -j * mean));
  }
  return s;
}

FourierFilterState init_uniform(int modes) { return FourierFilterState(modes); }

int default_modes(double photon_flux) {
  const double scaled = 6.0 * std::pow(2.0 * std::max(photon_flux, 0.0), 0.25);
  return std::max(16, static_cast<int>(std::ceil(scaled)));
}

FourierFilterState ks_step_heterodyne(FourierFilterState state, const HeterodyneSample& meas,
                                      const SimParams& params) {
  const double alpha = params.alpha_mag;
  if (alpha > 0.0) {
    const complex c1 = state.mean_phasor();
    const complex b1 = state.coeff(1);
    const complex zeta_dt = meas.i_c_dt - alpha * c1 * params.dt;
    const complex zeta_dt_conj = std::conj(zeta_dt);
    const double shrink = 4.0 * kPi * alpha * (zeta_dt * b1).real();
    FourierStepper::apply(state, [&](int, complex prev, complex cur, complex next) {
      return alpha * (zeta_dt * next + zeta_dt_conj * prev) - shrink * cur;
    });
  }
  FourierStepper::diffuse(state, params.kappa, params.dt);
  FourierStepper::finish(state);
  return state;
}

FourierFilterState ks_step_homodyne(FourierFilterState state, const HomodyneSample& meas,
                                    double lo_phase, const SimParams& params) {
  const double alpha = params.alpha_mag;
  if (alpha > 0.0) {
    const complex rot = std::polar(1.0, -lo_phase);  // e^{-i Phi}
    const double mean_cos = (state.mean_phasor() * rot).real();
    const double zeta_dt = meas.i_r_dt - 2.0 * alpha * mean_cos * params.dt;
    const double gain = alpha * zeta_dt;
    FourierStepper::apply(state, [&](int, complex prev, complex cur, complex next) {
      return gain * (rot * prev + std::conj(rot) * next - 2.0 * mean_cos * cur);
    });
  }
  FourierStepper::diffuse(state, params.kappa, params.dt);
  FourierStepper::finish(state);
  return state;
}

namespace {

// P <- P (1 + y) / (1 + x), x = <y>_P. The (1 - x + x^2) series of the
// normaliser agrees with this to the order the KS equation keeps; dividing
// exactly is what restores b_0 = 1/(2pi) afterwards anyway.
template <typename Drive>
FourierFilterState zakai_normalized(FourierFilterState state, const SimParams& params,
                                    Drive&& drive) {
  FourierStepper::apply(state, drive);
  FourierStepper::diffuse(state, params.kappa, params.dt);
  FourierStepper::finish(state);
  return state;
}

}  // namespace

FourierFilterState zakai_step_then_normalize(FourierFilterState state,
                                             const HeterodyneSample& meas,
                                             const SimParams& params) {
  // dP~ = |alpha| (e^{-i phi} I_c + c.c.) P~ dt
  const double alpha = params.alpha_mag;
  const complex in = meas.i_c_dt;
  const complex in_conj = std::conj(in);
  return zakai_normalized(std::move(state), params, [&](int, complex prev, complex, complex next) {
    return alpha * (in * next + in_conj * prev);
  });
}

FourierFilterState zakai_step_then_normalize(FourierFilterState state, const HomodyneSample& meas,
                                             double lo_phase, const SimParams& params) {
  // dP~ = |alpha| (e^{i(phi - Phi)} I_r + c.c.) P~ dt
  const double alpha = params.alpha_mag;
  const complex rot = std::polar(1.0, -lo_phase);
  const double gain = alpha * meas.i_r_dt;
  return zakai_normalized(std::move(state), params, [&](int, complex prev, complex, complex next) {
    return gain * (rot * prev + std::conj(rot) * next);
  });
}

PhaseEstimate estimate(const FourierFilterState& state) {
  const complex c1 = state.mean_phasor();
  const double sharpness = std::abs(c1);
  if (sharpness == 0.0) return {0.0, 0.0};
  return {wrap_angle(std::arg(c1)), sharpness};
}

void write_coefficients_csv(std::ostream& os, const FourierFilterState& state) {
  os << "j,re,im\n";
  char line[96];
  for (int j = -state.modes(); j <= state.modes(); ++j) {
    const complex v = state.coeff(j);
    std::snprintf(line, sizeof line, "%d,%.17g,%.17g\n", j, v.real(), v.imag());
    os << line;
  }
}

}  // namespace cwphase
