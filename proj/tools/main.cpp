// Command-line front end: sweep, trace, check, asymptote.
#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "cwphase/acceptance.hpp"
#include "cwphase/analytics.hpp"
#include "cwphase/errors.hpp"
#include "cwphase/experiment.hpp"

namespace {

using namespace cwphase;

struct Cli {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::optional<std::string> out;
  std::optional<std::string> schemes;
  std::optional<std::string> n_grid;
};

void add_common(CLI::App* cmd, Cli& cli) {
  cmd->add_option("--config", cli.config_path, "key=value config file");
  cmd->add_option("--seed", cli.seed, "master seed");
  cmd->add_option("--jobs", cli.jobs, "concurrent workers")->check(CLI::PositiveNumber);
  cmd->add_option("--out", cli.out, "output CSV path");
}

// Config file first, then flags, so flags win.
RunConfig build_config(const Cli& cli, const std::vector<std::pair<std::string, std::string>>& extra) {
  RunConfig config;
  if (!cli.config_path.empty()) load_config_file(cli.config_path, config);
  if (cli.seed) config.sweep.seed = *cli.seed;
  if (cli.jobs) config.sweep.jobs = *cli.jobs;
  if (cli.out) config.sweep.out = *cli.out;
  if (cli.schemes) config.sweep.schemes = parse_scheme_list(*cli.schemes);
  if (cli.n_grid) config.sweep.n_grid = parse_number_list(*cli.n_grid);
  for (const auto& [key, value] : extra) apply_setting(config, key, value);
  return config;
}

int cmd_sweep(const RunConfig& config) {
  const auto rows = run_sweep(config.sweep);
  if (config.sweep.out.empty()) {
    write_sweep_csv(std::cout, rows, config.sweep.timing);
    try {
      std::cerr << report(rows);
    } catch (const ConfigError& e) {
      std::cerr << "report unavailable: " << e.what() << '\n';
    }
  } else {
    std::cout << "wrote " << config.sweep.out << " and " << config.sweep.out << ".report.txt\n";
  }
  for (const auto& r : rows) {
    if (r.status != "ok") return 1;
  }
  return 0;
}

int cmd_trace(const RunConfig& config) {
  const TraceSpec& t = config.trace;
  ResolveDefaults d = resolve_defaults(config.sweep);
  d.canonical_in_sweep = t.scheme == SchemeKind::Canonical;
  d.filter_in_sweep = uses_filter(t.scheme);
  d.horizon.reset();
  SimParams p = resolve_params(t.n, d);
  if (t.horizon) {
    // A trace has no steady-state statistics worth keeping; short horizons are fine.
    p.horizon = *t.horizon;
    p.burn_in = std::min(p.burn_in, 0.5 * p.horizon);
    p.validate();
  }
  TrajectoryOptions options;
  options.record_stride = t.stride;
  const TrajectoryResult r = run_trajectory(t.scheme, p, 0, options);
  if (config.sweep.out.empty()) {
    write_trace_csv(std::cout, r.records);
  } else {
    std::ofstream os(config.sweep.out, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + config.sweep.out + "'");
    write_trace_csv(os, r.records);
  }
  return 0;
}

int cmd_check(const Cli& cli, const std::vector<int>& ids) {
  AcceptanceOptions options;
  if (cli.seed) options.seed = *cli.seed;
  if (cli.jobs) options.jobs = *cli.jobs;
  AcceptanceSuite suite(options);
  int failed = 0;
  std::ofstream file;
  if (cli.out) file.open(*cli.out);
  std::vector<int> run_ids = ids;
  if (run_ids.empty()) {
    for (int id = 1; id <= kCriterionCount; ++id) run_ids.push_back(id);
  }
  for (int id : run_ids) {
    const CriterionResult r = suite.run(id);
    failed += !r.pass;
    const std::string line = format_result(r);
    std::cout << line << std::endl;
    if (file) file << line << '\n';
  }
  std::cout << (run_ids.size() - failed) << '/' << run_ids.size() << " criteria passed\n";
  return failed ? 1 : 0;
}

int cmd_asymptote(const RunConfig& config) {
  const auto grid = config.sweep.n_grid.empty() ? default_n_grid() : config.sweep.n_grid;
  std::printf("%10s %14s %14s %14s %14s\n", "N", "het-small", "het-large", "adapt-small",
              "adapt-large");
  for (double n : grid) {
    std::printf("%10.4g %14.6g %14.6g %14.6g %14.6g\n", n,
                asymptote(AsymptoteClass::HeterodyneSmall, n),
                asymptote(AsymptoteClass::HeterodyneLarge, n),
                asymptote(AsymptoteClass::AdaptiveSmall, n),
                asymptote(AsymptoteClass::AdaptiveLarge, n));
  }
  std::printf("ratio limits: small N 4/pi = %.6f, large N sqrt(2) = %.6f\n", kSmallFluxRatio,
              kLargeFluxRatio);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuous-wave phase estimation: simulation sweeps and checks"};
  app.require_subcommand(1);
  Cli cli;

  std::vector<std::pair<std::string, std::string>> extra;
  auto setting = [&extra](CLI::App* cmd, const std::string& flag, const std::string& key,
                          const std::string& help) {
    cmd->add_option_function<std::string>(
        flag, [&extra, key](const std::string& v) { extra.emplace_back(key, v); }, help);
  };

  auto* sweep = app.add_subcommand("sweep", "run schemes over a photon-flux grid, write CSV");
  add_common(sweep, cli);
  sweep->add_option("--schemes", cli.schemes, "comma list of schemes, or 'all'");
  sweep->add_option("--n-grid", cli.n_grid, "comma list of photon fluxes N");
  setting(sweep, "--n-traj", "n_traj", "trajectories per cell");
  setting(sweep, "--horizon", "horizon", "simulated time per trajectory");
  setting(sweep, "--horizon-factor", "horizon_factor", "horizon as a multiple of burn-in");
  setting(sweep, "--dt", "dt", "integration step");
  setting(sweep, "--modes", "n_modes", "Fourier truncation J (disables convergence search)");
  setting(sweep, "--chi", "chi", "functional window rate");
  setting(sweep, "--eta", "eta", "detector efficiency");
  setting(sweep, "--check-truncation", "check_truncation", "true/false");
  setting(sweep, "--timing", "timing", "record wall time (true/false)");

  auto* trace = app.add_subcommand("trace", "write one trajectory as CSV");
  add_common(trace, cli);
  setting(trace, "--scheme", "scheme", "scheme name");
  setting(trace, "--n", "n", "photon flux N");
  setting(trace, "--stride", "stride", "keep every k-th step");
  setting(trace, "--horizon", "horizon", "simulated time");
  setting(trace, "--dt", "dt", "integration step");
  setting(trace, "--modes", "n_modes", "Fourier truncation J");
  setting(trace, "--chi", "chi", "functional window rate");

  auto* check = app.add_subcommand("check", "run acceptance criteria, one line each");
  add_common(check, cli);
  std::vector<int> criteria;
  check->add_option("--criteria", criteria, "criterion numbers (default: all)")
      ->delimiter(',')
      ->check(CLI::Range(1, kCriterionCount));

  auto* asym = app.add_subcommand("asymptote", "print the analytic asymptote table");
  asym->add_option("--config", cli.config_path, "key=value config file");
  asym->add_option("--n-grid", cli.n_grid, "comma list of photon fluxes N");

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return cmd_check(cli, criteria);
    const RunConfig config = build_config(cli, extra);
    if (sweep->parsed()) return cmd_sweep(config);
    if (trace->parsed()) return cmd_trace(config);
    return cmd_asymptote(config);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
