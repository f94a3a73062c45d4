#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "cwphase/fourier_filter.hpp"
#include "cwphase/holevo.hpp"
#include "cwphase/sim_params.hpp"

namespace cwphase {

/// The six phase-estimation schemes (detection, estimator, feedback law).
enum class SchemeKind {
  Canonical,            ///< canonical phase measurement, KS filter, no feedback
  OptimalHeterodyne,    ///< heterodyne, KS filter, no feedback
  BWHeterodyne,         ///< heterodyne, arg A, no feedback
  BWAdaptive,           ///< homodyne, arg(A + chi B A*), dPhi = g I_r dt
  SemiOptimalAdaptive,  ///< homodyne, KS filter, Phi = phi_hat + pi/2
  SimpleAdaptive,       ///< homodyne, phi_hat = Phi - pi/2, dPhi = g I_r dt
};

inline constexpr std::array<SchemeKind, 6> kAllSchemes = {
    SchemeKind::Canonical,  SchemeKind::OptimalHeterodyne,   SchemeKind::BWHeterodyne,
    SchemeKind::BWAdaptive, SchemeKind::SemiOptimalAdaptive, SchemeKind::SimpleAdaptive};

std::string_view to_string(SchemeKind kind);
SchemeKind parse_scheme(std::string_view name);  ///< accepts the to_string names
bool uses_filter(SchemeKind kind);
bool is_adaptive(SchemeKind kind);

/// One recorded step. Optional fields are absent for schemes without a filter
/// (sharpness) or without a local oscillator (lo_phase).
struct StepRecord {
  double t = 0.0;
  double phi_true = 0.0;
  double phi_hat = 0.0;
  std::optional<double> sharpness;
  std::optional<double> lo_phase;
};

/// Steady-state statistics of one or more trajectories, split into blocks for
/// the bootstrap. Blocks carry (stream, index) keys so merging is order-free.
struct SteadyStateSummary {
  struct Block {
    std::uint64_t stream = 0;
    std::uint64_t index = 0;
    HolevoAccumulator acc;
  };
  std::vector<Block> blocks;

  HolevoAccumulator total() const;
  std::vector<HolevoAccumulator> block_accumulators() const;
  /// Concatenates and re-sorts by key. Associative and commutative.
  SteadyStateSummary& merge(const SteadyStateSummary& other);
};

struct TrajectoryResult {
  SchemeKind kind{};
  std::vector<StepRecord> records;  ///< empty unless recording was requested
  SteadyStateSummary summary;
  int modes_used = 0;
};

/// Called once per step with the record and, for filter schemes, the filter.
using StepObserver = std::function<void(const StepRecord&, const FourierFilterState*)>;

struct TrajectoryOptions {
  bool record = true;          ///< keep every step's record (horizon/dt of them)
  std::uint64_t record_stride = 1;
  StepObserver observer;       ///< optional per-step hook
};

/// Simulates one closed-loop trajectory. Per step: evolve the true phase,
/// measure with the local-oscillator phase fixed at the end of the previous
/// step, update the estimator, update the feedback, record.
/// Fully determined by (kind, params, stream_index).
TrajectoryResult run_trajectory(SchemeKind kind, const SimParams& params,
                                std::uint64_t stream_index,
                                const TrajectoryOptions& options = {});

/// Block length (in steps) used for bootstrap blocks: round(5/chi / dt), >= 1.
std::uint64_t bootstrap_block_steps(const SimParams& params);

struct EnsembleResult {
  SchemeKind kind{};
  SteadyStateSummary summary;
  BootstrapEstimate v_errors;                    ///< from phasors of phi - phi_hat
  std::optional<BootstrapEstimate> v_sharpness;  ///< filter schemes only
  int modes_used = 0;

  /// Sharpness-based estimate for filter schemes, error-based otherwise.
  const BootstrapEstimate& primary() const { return v_sharpness ? *v_sharpness : v_errors; }
};

inline constexpr int kBootstrapResamples = 400;

/// Runs trajectories with stream indices first_stream .. first_stream+n_traj-1
/// (concurrently up to `jobs`) and merges their steady-state summaries.
EnsembleResult run_ensemble(SchemeKind kind, const SimParams& params, int n_traj, int jobs = 1,
                            std::uint64_t first_stream = 0);

/// Bootstrap estimates for an already merged summary.
EnsembleResult summarize(SchemeKind kind, const SteadyStateSummary& summary, std::uint64_t seed);

/// Trace export: header `t,phi_true,phi_hat,Phi,sharpness`; absent values are empty.
void write_trace_csv(std::ostream& os, const std::vector<StepRecord>& records);

}  // namespace cwphase
