#include "cwphase/analytics.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <string>

#include "cwphase/errors.hpp"

namespace cwphase {

namespace {

void require_positive_flux(double n) {
  if (!(n > 0.0) || !std::isfinite(n)) throw ConfigError("photon flux N must be finite and > 0");
}

double flux_of(const SimParams& p) {
  const double n = p.photon_flux();
  require_positive_flux(n);
  return n;
}

template <typename F>
double integrate(F f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13);
}

// Standard normal density: |<y|0>|^2 for a quadrature with unit vacuum variance.
double vacuum_density(double y) { return std::exp(-0.5 * y * y) / std::sqrt(kTwoPi); }

constexpr double kTailCut = 40.0;

}  // namespace

double asymptote(AsymptoteClass cls, double n) {
  require_positive_flux(n);
  switch (cls) {
    case AsymptoteClass::HeterodyneSmall: return 4.0 / (kPi * n);
    case AsymptoteClass::HeterodyneLarge: return 1.0 / std::sqrt(2.0 * n);
    case AsymptoteClass::AdaptiveSmall: return 1.0 / n;
    case AsymptoteClass::AdaptiveLarge: return 1.0 / (2.0 * std::sqrt(n));
  }
  throw ConfigError("unknown asymptote class");
}

AsymptoteClass parse_asymptote_class(std::string_view name) {
  if (name == "heterodyne-small") return AsymptoteClass::HeterodyneSmall;
  if (name == "heterodyne-large") return AsymptoteClass::HeterodyneLarge;
  if (name == "adaptive-small") return AsymptoteClass::AdaptiveSmall;
  if (name == "adaptive-large") return AsymptoteClass::AdaptiveLarge;
  throw ConfigError("unknown asymptote class '" + std::string(name) + "'");
}

std::string_view to_string(AsymptoteClass cls) {
  switch (cls) {
    case AsymptoteClass::HeterodyneSmall: return "heterodyne-small";
    case AsymptoteClass::HeterodyneLarge: return "heterodyne-large";
    case AsymptoteClass::AdaptiveSmall: return "adaptive-small";
    case AsymptoteClass::AdaptiveLarge: return "adaptive-large";
  }
  return "?";
}

double gaussian_sigma2(double t, const SimParams& params) {
  if (!(t > 0.0)) throw ConfigError("gaussian_sigma2 needs t > 0");
  const double n = flux_of(params);
  const double x = 2.0 * std::sqrt(2.0) * params.alpha_mag * params.alpha_mag * t / std::sqrt(n);
  // (e^x + 1)/(e^x - 1) = coth(x/2)
  return 1.0 / (std::sqrt(2.0 * n) * std::tanh(0.5 * x));
}

double gaussian_sigma2_limit(const SimParams& params) {
  return 1.0 / std::sqrt(2.0 * flux_of(params));
}

double mismatch_variance(double a, const SimParams& params) {
  if (!(a > 0.0)) throw ConfigError("mismatch_variance needs a > 0");
  if (a > params.alpha_mag) throw ConfigError("mismatch_variance needs a <= |alpha|");
  const double rk = std::sqrt(params.kappa);
  const double alpha2 = params.alpha_mag * params.alpha_mag;
  return 2.0 * rk * a / (8.0 * alpha2) + rk / (2.0 * a);
}

double linearized_feedback_variance(double gain, const SimParams& params) {
  if (!(gain > 0.0)) throw ConfigError("feedback gain must be > 0");
  if (!(params.alpha_mag > 0.0)) throw ConfigError("linearised loop needs |alpha| > 0");
  return (params.kappa + gain * gain) / (4.0 * params.alpha_mag * gain);
}

DiscriminationResult discrimination_probs(double gamma, double phi) {
  if (!(gamma >= 0.0) || !(gamma < 1.0)) {
    throw ConfigError("discrimination_probs needs 0 <= gamma < 1");
  }
  const double s = std::sin(phi);
  const double norm = 1.0 + gamma * gamma;
  DiscriminationResult out;
  if (s == 0.0 || gamma == 0.0) return out;
  const double sign = s > 0.0 ? 1.0 : -1.0;

  // Y quadrature: |<y|psi_pm>|^2 = rho0(y) (1 +- 2 gamma y sin(phi) + gamma^2 y^2).
  // Guess "+" when y sin(phi) > 0; by symmetry both hypotheses score the same.
  auto y_plus = [&](double y) {
    return vacuum_density(y) * (1.0 + 2.0 * gamma * y * s + gamma * gamma * y * y);
  };
  const double y_correct =
      sign > 0.0 ? integrate(y_plus, 0.0, kTailCut) : integrate(y_plus, -kTailCut, 0.0);
  out.p_y = y_correct / norm;

  // Canonical: P(theta | pm) = (1 + 2 gamma cos(theta -+ phi) + gamma^2) / (2 pi).
  // Guess "+" when sin(theta) sin(phi) > 0.
  auto c_plus = [&](double theta) {
    return (1.0 + 2.0 * gamma * std::cos(theta - phi) + gamma * gamma) / kTwoPi;
  };
  const double c_correct = sign > 0.0 ? integrate(c_plus, 0.0, kPi) : integrate(c_plus, -kPi, 0.0);
  out.p_canonical = c_correct / norm;
  return out;
}

DiscriminationSlopes discrimination_slopes() {
  // d p / d(gamma sin phi) at gamma = 0 from the linear term of each density.
  DiscriminationSlopes out;
  out.y_quadrature = integrate([](double y) { return 2.0 * y * vacuum_density(y); }, 0.0, kTailCut);
  // At phi = pi/2 the linear canonical term is 2 cos(theta - pi/2)/(2pi) = sin(theta)/pi.
  out.canonical = integrate([](double theta) { return std::sin(theta) / kPi; }, 0.0, kPi);
  return out;
}

double steady_start(const SimParams& params) {
  double t0 = 0.0;
  if (params.kappa > 0.0) t0 = std::max(t0, 20.0 / params.kappa);
  if (params.kappa > 0.0 && params.alpha_mag > 0.0) {
    t0 = std::max(t0, 20.0 / (params.alpha_mag * std::sqrt(params.kappa)));
  }
  t0 = std::max(t0, 10.0 / window_rate(params));
  return t0;
}

SteadyWindow steady_window(const SimParams& params) {
  const double t0 = steady_start(params);
  if (params.horizon < 2.0 * t0) {
    throw ConfigError("horizon " + std::to_string(params.horizon) +
                      " is shorter than twice the steady-state start " + std::to_string(t0));
  }
  return {t0, params.horizon};
}

}  // namespace cwphase
