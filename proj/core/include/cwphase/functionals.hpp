#pragma once

#include <complex>

namespace cwphase {

/// Exponentially windowed functionals
///   A_t = int_{-inf}^t e^{chi(u-t)} input(u) du,   B_t = int e^{chi(u-t)} e^{2i Phi(u)} du
/// discretised as exact decay plus the step's increment. Both start at zero.
struct WindowedFunctionals {
  std::complex<double> A{};
  std::complex<double> B{};
  double chi = 1.0;
};

/// A' = A e^{-chi dt} + input. `input` is an increment: I_c dt for heterodyne,
/// e^{i Phi} I_r dt for the adaptive schemes.
WindowedFunctionals update_A(WindowedFunctionals state, std::complex<double> input, double dt);

/// B' = B e^{-chi dt} + e^{2 i Phi} dt.
WindowedFunctionals update_B(WindowedFunctionals state, double lo_phase, double dt);

/// arg A, or 0 when A = 0.
double bw_het_estimate(const WindowedFunctionals& state);

/// arg(A + chi B conj(A)), or 0 when that vanishes.
double bw_adaptive_estimate(const WindowedFunctionals& state);

}  // namespace cwphase
