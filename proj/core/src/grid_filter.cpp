#include "cwphase/grid_filter.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cwphase/errors.hpp"

namespace cwphase {

GridFilterState uniform_grid(std::size_t points) {
  if (points == 0) throw ConfigError("grid filter needs at least one point");
  return {std::vector<double>(points, 1.0 / kTwoPi)};
}

std::vector<double> sample_density(const FourierFilterState& state, std::size_t points) {
  GridFilterState g = uniform_grid(points);
  std::vector<double> out(points);
  for (std::size_t m = 0; m < points; ++m) out[m] = state.density(g.node(m));
  return out;
}

GridFilterState grid_from_fourier(const FourierFilterState& state, std::size_t points) {
  GridFilterState g{sample_density(state, points)};
  for (double& v : g.p) v = std::max(v, 0.0);
  const double mass = std::accumulate(g.p.begin(), g.p.end(), 0.0) * g.spacing();
  for (double& v : g.p) v /= mass;
  return g;
}

PhaseEstimate estimate(const GridFilterState& state) {
  std::complex<double> c1{};
  for (std::size_t m = 0; m < state.size(); ++m) c1 += state.p[m] * std::polar(1.0, state.node(m));
  c1 *= state.spacing();
  const double sharpness = std::abs(c1);
  if (sharpness == 0.0) return {0.0, 0.0};
  return {wrap_angle(std::arg(c1)), sharpness};
}

std::vector<double> heterodyne_log_likelihood(std::size_t points, const HeterodyneSample& meas,
                                              const SimParams& params) {
  const GridFilterState g = uniform_grid(points);
  const double a = params.alpha_mag;
  std::vector<double> out(points);
  for (std::size_t m = 0; m < points; ++m) {
    const double proj = (std::polar(1.0, -g.node(m)) * meas.i_c_dt).real();
    out[m] = 2.0 * a * proj - a * a * params.dt;
  }
  return out;
}

std::vector<double> homodyne_log_likelihood(std::size_t points, const HomodyneSample& meas,
                                            double lo_phase, const SimParams& params) {
  const GridFilterState g = uniform_grid(points);
  const double a = params.alpha_mag;
  std::vector<double> out(points);
  for (std::size_t m = 0; m < points; ++m) {
    const double c = std::cos(g.node(m) - lo_phase);
    out[m] = 2.0 * a * c * meas.i_r_dt - 2.0 * a * a * c * c * params.dt;
  }
  return out;
}

std::vector<double> canonical_log_likelihood(std::size_t points, const CanonicalSample& meas,
                                             const SimParams& params) {
  const GridFilterState g = uniform_grid(points);
  const double strength = 2.0 * params.alpha_mag * std::sqrt(params.dt);
  std::vector<double> out(points);
  for (std::size_t m = 0; m < points; ++m) {
    out[m] = std::log1p(strength * std::cos(meas.theta - g.node(m)));
  }
  return out;
}

GridDiffusion::GridDiffusion(std::size_t points, double variance)
    : variance_(variance), kernel_(points), scratch_(points) {
  if (points == 0) throw ConfigError("grid filter needs at least one point");
  if (!(variance >= 0.0)) throw ConfigError("diffusion variance must be >= 0");
  const auto M = static_cast<long>(points);
  const long nyquist = M / 2;
  const double h = kTwoPi / static_cast<double>(M);
  for (long m = 0; m < M; ++m) {
    const double x = h * static_cast<double>(m);
    double k = 1.0;
    for (long j = 1; j <= nyquist; ++j) {
      const double damp = std::exp(-0.5 * static_cast<double>(j * j) * variance);
      // The Nyquist mode of an even-length grid appears once, not twice.
      const double weight = (M % 2 == 0 && j == nyquist) ? 1.0 : 2.0;
      k += weight * damp * std::cos(static_cast<double>(j) * x);
    }
    kernel_[static_cast<std::size_t>(m)] = k / static_cast<double>(M);
  }
}

void GridDiffusion::apply(std::vector<double>& p) const {
  const std::size_t M = kernel_.size();
  if (p.size() != M) throw ConfigError("grid size does not match diffusion kernel");
  if (variance_ == 0.0) return;
  for (std::size_t m = 0; m < M; ++m) {
    double acc = 0.0;
    // out[m] = sum_k kernel[(m - k) mod M] p[k]
    for (std::size_t k = 0; k <= m; ++k) acc += kernel_[m - k] * p[k];
    for (std::size_t k = m + 1; k < M; ++k) acc += kernel_[m + M - k] * p[k];
    scratch_[m] = acc;
  }
  p.swap(scratch_);
}

namespace {

void normalize_or_throw(std::vector<double>& p, double spacing) {
  const double mass = std::accumulate(p.begin(), p.end(), 0.0) * spacing;
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw NumericalError("grid posterior vanished; accumulate likelihoods in log space");
  }
  for (double& v : p) v /= mass;
}

}  // namespace

GridFilterState grid_bayes_step(GridFilterState state, std::span<const double> log_likelihood,
                                const GridDiffusion& diffusion) {
  if (log_likelihood.size() != state.size()) {
    throw ConfigError("likelihood size does not match grid size");
  }
  const double top = *std::max_element(log_likelihood.begin(), log_likelihood.end());
  if (!std::isfinite(top)) throw ConfigError("log-likelihood must be finite");
  for (std::size_t m = 0; m < state.size(); ++m) {
    state.p[m] *= std::exp(log_likelihood[m] - top);
  }
  normalize_or_throw(state.p, state.spacing());
  diffusion.apply(state.p);
  // The band-projected kernel can ring slightly below zero next to sharp peaks.
  for (double& v : state.p) v = std::max(v, 0.0);
  normalize_or_throw(state.p, state.spacing());
  return state;
}

GridFilterState grid_bayes_step(GridFilterState state, std::span<const double> log_likelihood,
                                const SimParams& params) {
  const GridDiffusion diffusion(state.size(), params.kappa * params.dt);
  return grid_bayes_step(std::move(state), log_likelihood, diffusion);
}

GridFilterState grid_bayes_step_weights(GridFilterState state, std::span<const double> weights,
                                        const SimParams& params) {
  std::vector<double> logs(weights.size());
  for (std::size_t m = 0; m < weights.size(); ++m) {
    if (!(weights[m] > 0.0) || !std::isfinite(weights[m])) {
      throw ConfigError("likelihood weights must be positive and finite");
    }
    logs[m] = std::log(weights[m]);
  }
  return grid_bayes_step(std::move(state), logs, params);
}

}  // namespace cwphase
