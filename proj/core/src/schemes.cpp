#include "cwphase/schemes.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>

#include "cwphase/errors.hpp"
#include "cwphase/functionals.hpp"
#include "cwphase/measurement.hpp"
#include "cwphase/true_phase.hpp"

namespace cwphase {

std::string_view to_string(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::Canonical: return "canonical";
    case SchemeKind::OptimalHeterodyne: return "optimal-heterodyne";
    case SchemeKind::BWHeterodyne: return "bw-heterodyne";
    case SchemeKind::BWAdaptive: return "bw-adaptive";
    case SchemeKind::SemiOptimalAdaptive: return "semi-optimal-adaptive";
    case SchemeKind::SimpleAdaptive: return "simple-adaptive";
  }
  return "?";
}

SchemeKind parse_scheme(std::string_view name) {
  for (SchemeKind kind : kAllSchemes) {
    if (to_string(kind) == name) return kind;
  }
  throw ConfigError("unknown scheme '" + std::string(name) +
                    "' (expected canonical, optimal-heterodyne, bw-heterodyne, bw-adaptive, "
                    "semi-optimal-adaptive or simple-adaptive)");
}

bool uses_filter(SchemeKind kind) {
  return kind == SchemeKind::Canonical || kind == SchemeKind::OptimalHeterodyne ||
         kind == SchemeKind::SemiOptimalAdaptive;
}

bool is_adaptive(SchemeKind kind) {
  return kind == SchemeKind::BWAdaptive || kind == SchemeKind::SemiOptimalAdaptive ||
         kind == SchemeKind::SimpleAdaptive;
}

HolevoAccumulator SteadyStateSummary::total() const {
  HolevoAccumulator acc;
  for (const auto& b : blocks) acc.merge(b.acc);
  return acc;
}

std::vector<HolevoAccumulator> SteadyStateSummary::block_accumulators() const {
  std::vector<HolevoAccumulator> out;
  out.reserve(blocks.size());
  for (const auto& b : blocks) out.push_back(b.acc);
  return out;
}

SteadyStateSummary& SteadyStateSummary::merge(const SteadyStateSummary& other) {
  blocks.insert(blocks.end(), other.blocks.begin(), other.blocks.end());
  std::sort(blocks.begin(), blocks.end(), [](const Block& a, const Block& b) {
    return a.stream != b.stream ? a.stream < b.stream : a.index < b.index;
  });
  return *this;
}

std::uint64_t bootstrap_block_steps(const SimParams& params) {
  const double steps = std::round(5.0 / window_rate(params) / params.dt);
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(steps));
}

namespace {

// Distinct schemes draw from distinct streams even at equal stream_index, so
// cross-scheme comparisons use independent noise.
std::uint64_t stream_key(SchemeKind kind, std::uint64_t stream_index) {
  return ((static_cast<std::uint64_t>(kind) + 1) << 48) ^ stream_index;
}

// Representative of `target` (mod 2pi) closest to `reference`.
double unwrap_near(double target, double reference) {
  return target + kTwoPi * std::round((reference - target) / kTwoPi);
}

}  // namespace

TrajectoryResult run_trajectory(SchemeKind kind, const SimParams& params,
                                std::uint64_t stream_index, const TrajectoryOptions& options) {
  if (kind == SchemeKind::Canonical) {
    params.validate_canonical();
  } else {
    params.validate();
  }

  TrajectoryResult result;
  result.kind = kind;
  result.modes_used = uses_filter(kind) ? params.n_modes : 0;

  RngStream rng(params.seed, stream_key(kind, stream_index));
  const double dt = params.dt;
  const std::uint64_t steps = params.total_steps();
  const auto burn_steps = static_cast<std::uint64_t>(std::ceil(params.burn_in / dt - 1e-9));
  const std::uint64_t block_steps = bootstrap_block_steps(params);
  const double gain = feedback_gain(params);
  const std::uint64_t stride = std::max<std::uint64_t>(1, options.record_stride);

  // Nothing is known initially: the true phase is uniform and the estimate 0.
  TruePhase truth{-kPi + kTwoPi * rng.uniform(), 0.0};
  double lo_phase = kPi / 2.0;
  FourierFilterState filter(uses_filter(kind) ? params.n_modes : 1);
  WindowedFunctionals functionals{.A = {}, .B = {}, .chi = window_rate(params)};

  if (options.record) result.records.reserve(static_cast<std::size_t>(steps / stride + 1));
  SteadyStateSummary::Block block{stream_index, 0, {}};

  for (std::uint64_t k = 1; k <= steps; ++k) {
    truth = evolve_true_phase(truth, params, rng);
    StepRecord rec;
    rec.t = static_cast<double>(k) * dt;
    rec.phi_true = truth.phi;

    try {
      switch (kind) {
        case SchemeKind::Canonical: {
          const CanonicalSample s = sample_canonical(truth.phi, params, rng);
          filter = ks_step_heterodyne(std::move(filter), canonical_drive(s, dt), params);
          break;
        }
        case SchemeKind::OptimalHeterodyne: {
          const HeterodyneSample m = sample_heterodyne(truth.phi, params, rng);
          filter = ks_step_heterodyne(std::move(filter), m, params);
          break;
        }
        case SchemeKind::BWHeterodyne: {
          const HeterodyneSample m = sample_heterodyne(truth.phi, params, rng);
          functionals = update_A(functionals, m.i_c_dt, dt);
          rec.phi_hat = bw_het_estimate(functionals);
          break;
        }
        case SchemeKind::BWAdaptive: {
          const HomodyneSample m = sample_homodyne(truth.phi, lo_phase, params, rng);
          functionals = update_A(functionals, std::polar(m.i_r_dt, lo_phase), dt);
          // B enters with the opposite sign to the locked-quadrature convention
          // used here (I_r ~ cos(phi - Phi), Phi -> phi + pi/2). Feeding it
          // Phi - pi/2 flips e^{2i Phi} so that A + chi B A* undoes the
          // e^{-i phi} image term of A instead of doubling it.
          functionals = update_B(functionals, lo_phase - kPi / 2.0, dt);
          rec.phi_hat = bw_adaptive_estimate(functionals);
          lo_phase += gain * m.i_r_dt;
          rec.lo_phase = lo_phase;
          break;
        }
        case SchemeKind::SemiOptimalAdaptive: {
          const HomodyneSample m = sample_homodyne(truth.phi, lo_phase, params, rng);
          filter = ks_step_homodyne(std::move(filter), m, lo_phase, params);
          break;
        }
        case SchemeKind::SimpleAdaptive: {
          const HomodyneSample m = sample_homodyne(truth.phi, lo_phase, params, rng);
          lo_phase += gain * m.i_r_dt;
          rec.phi_hat = wrap_angle(lo_phase - kPi / 2.0);
          rec.lo_phase = lo_phase;
          break;
        }
      }
    } catch (const NumericalError& e) {
      throw NumericalError(std::string(to_string(kind)) + " at t = " + std::to_string(rec.t) +
                           ": " + e.what());
    }

    if (uses_filter(kind)) {
      const PhaseEstimate est = estimate(filter);
      rec.phi_hat = est.phi_hat;
      rec.sharpness = est.sharpness;
      if (kind == SchemeKind::SemiOptimalAdaptive) {
        lo_phase = unwrap_near(est.phi_hat + kPi / 2.0, lo_phase);
        rec.lo_phase = lo_phase;
      }
    }

    if (k > burn_steps) {
      const std::uint64_t idx = (k - burn_steps - 1) / block_steps;
      if (idx != block.index) {
        result.summary.blocks.push_back(block);
        block = {stream_index, idx, {}};
      }
      const double error = rec.phi_true - rec.phi_hat;
      if (rec.sharpness) {
        block.acc.add(error, *rec.sharpness);
      } else {
        block.acc.add(error);
      }
    }

    if (options.observer) options.observer(rec, uses_filter(kind) ? &filter : nullptr);
    if (options.record && (k % stride == 0)) result.records.push_back(rec);
  }
  if (block.acc.count > 0) result.summary.blocks.push_back(block);
  return result;
}

EnsembleResult summarize(SchemeKind kind, const SteadyStateSummary& summary, std::uint64_t seed) {
  if (summary.blocks.empty()) throw ConfigError("no steady-state samples (horizon <= burn_in?)");
  EnsembleResult out;
  out.kind = kind;
  out.summary = summary;
  const std::vector<HolevoAccumulator> blocks = summary.block_accumulators();
  out.v_errors = bootstrap_holevo(blocks, HolevoEstimator::Errors, kBootstrapResamples, seed);
  if (uses_filter(kind)) {
    out.v_sharpness =
        bootstrap_holevo(blocks, HolevoEstimator::Sharpness, kBootstrapResamples, seed);
  }
  return out;
}

EnsembleResult run_ensemble(SchemeKind kind, const SimParams& params, int n_traj, int jobs,
                            std::uint64_t first_stream) {
  if (n_traj < 1) throw ConfigError("run_ensemble needs n_traj >= 1");
  std::vector<SteadyStateSummary> parts(static_cast<std::size_t>(n_traj));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  TrajectoryOptions options;
  options.record = false;

  auto worker = [&] {
    for (int i = next++; i < n_traj; i = next++) {
      try {
        parts[static_cast<std::size_t>(i)] =
            run_trajectory(kind, params, first_stream + static_cast<std::uint64_t>(i), options)
                .summary;
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = n_traj;
      }
    }
  };

  const int workers = std::clamp(jobs, 1, n_traj);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  SteadyStateSummary merged;
  for (const auto& p : parts) merged.merge(p);
  EnsembleResult out = summarize(kind, merged, params.seed);
  out.modes_used = uses_filter(kind) ? params.n_modes : 0;
  return out;
}

void write_trace_csv(std::ostream& os, const std::vector<StepRecord>& records) {
  os << "t,phi_true,phi_hat,Phi,sharpness\n";
  char buf[64];
  auto field = [&](const std::optional<double>& v) {
    if (!v) return std::string();
    std::snprintf(buf, sizeof buf, "%.10g", *v);
    return std::string(buf);
  };
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%.10g", r.t);
    os << buf << ',';
    std::snprintf(buf, sizeof buf, "%.10g", r.phi_true);
    os << buf << ',';
    std::snprintf(buf, sizeof buf, "%.10g", r.phi_hat);
    os << buf << ',' << field(r.lo_phase) << ',' << field(r.sharpness) << '\n';
  }
}

}  // namespace cwphase
