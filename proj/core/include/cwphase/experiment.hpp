#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cwphase/schemes.hpp"
#include "cwphase/sim_params.hpp"

namespace cwphase {

/// A sweep over photon fluxes N for a set of schemes. Time unit is the
/// coherence time (kappa = 1), so N is the only physical knob.
struct SweepSpec {
  std::vector<SchemeKind> schemes{SchemeKind::OptimalHeterodyne, SchemeKind::SemiOptimalAdaptive,
                                  SchemeKind::SimpleAdaptive};
  std::vector<double> n_grid;  ///< strictly increasing, all > 0
  std::string out;             ///< CSV path; empty writes nothing
  int n_traj = 1;
  std::uint64_t seed = 1;
  int jobs = 1;
  double horizon_factor = 50.0;  ///< horizon = factor * steady-state start
  std::optional<double> horizon;
  double eta = 1.0;
  std::optional<double> dt;
  std::optional<int> n_modes;
  std::optional<double> chi;
  bool check_truncation = true;
  bool timing = false;  ///< measured wall time in the CSV (breaks byte-reproducibility)

  void validate() const;
};

/// Log-spaced default grid 10^-2 .. 10^3.5 in half-decade steps.
std::vector<double> default_n_grid();

/// Largest |alpha|^2 dt at which the explicit filter step stays positive in
/// practice. The Euler likelihood factor 1 + 2|alpha| Re(e^{-i phi} dW) turns
/// negative once |alpha dW| > 1/2, which at |alpha|^2 dt = 0.1 happens every
/// few hundred steps; at 0.01 it is a > 5 sigma event.
inline constexpr double kFilterStepBound = 0.01;

/// Per-N parameter rule shared by every cell of a sweep.
struct ResolveDefaults {
  bool canonical_in_sweep = false;
  bool filter_in_sweep = false;  ///< a Kushner-Stratonovich filter scheme is swept
  double horizon_factor = 50.0;
  std::optional<double> horizon;
  double eta = 1.0;
  std::optional<double> dt;
  std::optional<int> n_modes;
  std::optional<double> chi;
  std::uint64_t seed = 1;
};
ResolveDefaults resolve_defaults(const SweepSpec& spec);

/// kappa = 1, |alpha| = sqrt(N), dt = min(1e-3, 1e-2/(|alpha| sqrt(kappa)),
/// canonical bound / 4 when the canonical scheme is swept, kFilterStepBound/|alpha|^2
/// when a filter scheme is swept), J = default_modes(N), burn_in = steady-state
/// start, horizon = horizon_factor * burn_in.
SimParams resolve_params(double photon_flux, const ResolveDefaults& defaults = {});

/// Doubles J from params.n_modes until a pilot run at 2J changes the steady
/// mean sharpness by less than `rel_tol`. Returns the converged J.
int converge_modes(SchemeKind kind, const SimParams& params, double rel_tol = 0.005,
                   int max_modes = 512);

struct SweepRow {
  SchemeKind scheme{};
  double n = 0.0;
  double v_h_ss = 0.0;  ///< sharpness estimator for filter schemes, error estimator otherwise
  double std_error = 0.0;
  double v_h_errors = 0.0;
  double std_error_errors = 0.0;
  std::uint64_t n_samples = 0;
  int j_used = 0;
  double dt_used = 0.0;
  double wall_time = 0.0;
  std::string status = "ok";
};

/// Runs every (scheme, N) cell; rows come back ordered by scheme then N no
/// matter which cell finishes first. A failing cell yields a row whose status
/// starts with "error:"; the sweep continues.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

/// Fixed CSV schema, one header line then one line per row.
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows, bool with_timing);
inline constexpr std::string_view kSweepCsvHeader =
    "scheme,N,V_H_SS,stderr,V_H_errors,stderr_errors,n_samples,J_used,dt_used,wall_time,status";

/// Text comparison of the rows against the analytic asymptotes and the
/// heterodyne/adaptive ratio bracket [4/pi - tol, sqrt(2) + tol].
/// Throws ConfigError describing what is missing if no N has both a
/// non-adaptive and an adaptive filter/loop row.
std::string report(const std::vector<SweepRow>& rows);
inline constexpr double kRatioBracketTol = 0.05;

/// Settings accepted by the config file and CLI flags.
struct TraceSpec {
  SchemeKind scheme = SchemeKind::SimpleAdaptive;
  double n = 1000.0;
  std::uint64_t stride = 1;
  std::optional<double> horizon;
};

struct RunConfig {
  SweepSpec sweep;
  TraceSpec trace;
};

/// Applies one key=value setting. Unknown keys and malformed values throw ConfigError.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

/// Flat UTF-8 key=value lines; '#' starts a comment; blank lines ignored.
void load_config(std::istream& is, RunConfig& config);
void load_config_file(const std::string& path, RunConfig& config);

std::vector<double> parse_number_list(std::string_view text);
std::vector<SchemeKind> parse_scheme_list(std::string_view text);

}  // namespace cwphase
