#pragma once

#include <complex>
#include <span>
#include <vector>

#include "cwphase/fourier_filter.hpp"
#include "cwphase/measurement.hpp"
#include "cwphase/sim_params.hpp"

namespace cwphase {

/// Brute-force Bayes filter: P(phi) sampled on phi_m = -pi + 2 pi m / M.
/// Invariants: p_m >= 0 and sum_m p_m (2pi/M) = 1.
struct GridFilterState {
  std::vector<double> p;

  std::size_t size() const { return p.size(); }
  double spacing() const { return kTwoPi / static_cast<double>(p.size()); }
  double node(std::size_t m) const { return -kPi + spacing() * static_cast<double>(m); }
};

GridFilterState uniform_grid(std::size_t points);

/// Samples a Fourier state on an M-point grid (negative lobes clipped to 0).
GridFilterState grid_from_fourier(const FourierFilterState& state, std::size_t points);

/// Same as grid_from_fourier without clipping; used for positivity checks.
std::vector<double> sample_density(const FourierFilterState& state, std::size_t points);

PhaseEstimate estimate(const GridFilterState& state);

/// Exact per-node log-likelihood ratios P(M|phi)/P(M)|_{alpha=0} of one step.
std::vector<double> heterodyne_log_likelihood(std::size_t points, const HeterodyneSample& meas,
                                              const SimParams& params);
std::vector<double> homodyne_log_likelihood(std::size_t points, const HomodyneSample& meas,
                                            double lo_phase, const SimParams& params);
std::vector<double> canonical_log_likelihood(std::size_t points, const CanonicalSample& meas,
                                             const SimParams& params);

/// Circular convolution with the wrapped normal of a given variance, projected
/// onto the grid's band (exact for band-limited densities). Kernel is cached.
class GridDiffusion {
 public:
  GridDiffusion(std::size_t points, double variance);
  void apply(std::vector<double>& p) const;
  std::size_t points() const { return kernel_.size(); }
  double variance() const { return variance_; }

 private:
  double variance_;
  std::vector<double> kernel_;
  mutable std::vector<double> scratch_;
};

/// Bayes update with log-space weights, renormalise, then diffuse for one dt.
/// Throws NumericalError when the posterior mass vanishes.
GridFilterState grid_bayes_step(GridFilterState state, std::span<const double> log_likelihood,
                                const GridDiffusion& diffusion);

/// Convenience overload that builds the kappa*dt diffusion kernel per call.
GridFilterState grid_bayes_step(GridFilterState state, std::span<const double> log_likelihood,
                                const SimParams& params);

/// Linear-weight overload. Weights must be positive and finite; they are moved
/// to log space before use.
GridFilterState grid_bayes_step_weights(GridFilterState state, std::span<const double> weights,
                                        const SimParams& params);

}  // namespace cwphase
