#include "cwphase/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "cwphase/analytics.hpp"
#include "cwphase/errors.hpp"

namespace cwphase {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_commas(std::string_view text) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = text.find(',');
    const auto item = trim(text.substr(0, comma));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

double parse_double(std::string_view key, std::string_view text) {
  const std::string s(trim(text));
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw ConfigError("'" + std::string(key) + "' expects a number, got '" + s + "'");
  }
  return v;
}

template <typename Int>
Int parse_int(std::string_view key, std::string_view text) {
  const auto s = trim(text);
  Int v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ConfigError("'" + std::string(key) + "' expects an integer, got '" + std::string(s) +
                      "'");
  }
  return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
  const auto s = trim(text);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError("'" + std::string(key) + "' expects true/false, got '" + std::string(s) + "'");
}

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

void SweepSpec::validate() const {
  if (schemes.empty()) throw ConfigError("sweep needs at least one scheme");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (!(n_grid[i] > 0.0)) throw ConfigError("n_grid values must be > 0");
    if (i > 0 && !(n_grid[i] > n_grid[i - 1])) throw ConfigError("n_grid must be strictly increasing");
  }
  if (n_traj < 1) throw ConfigError("n_traj must be >= 1");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  if (!(horizon_factor >= 2.0)) throw ConfigError("horizon_factor must be >= 2");
  if (!(eta > 0.0 && eta <= 1.0)) throw ConfigError("eta must lie in (0, 1]");
}

std::vector<double> default_n_grid() {
  std::vector<double> grid;
  for (int k = -4; k <= 7; ++k) grid.push_back(std::pow(10.0, 0.5 * k));
  return grid;
}

ResolveDefaults resolve_defaults(const SweepSpec& spec) {
  ResolveDefaults d;
  d.canonical_in_sweep = std::find(spec.schemes.begin(), spec.schemes.end(),
                                   SchemeKind::Canonical) != spec.schemes.end();
  d.filter_in_sweep = std::any_of(spec.schemes.begin(), spec.schemes.end(), uses_filter);
  d.horizon_factor = spec.horizon_factor;
  d.horizon = spec.horizon;
  d.eta = spec.eta;
  d.dt = spec.dt;
  d.n_modes = spec.n_modes;
  d.chi = spec.chi;
  d.seed = spec.seed;
  return d;
}

SimParams resolve_params(double n, const ResolveDefaults& defaults) {
  if (!(n > 0.0)) throw ConfigError("resolve_params needs N > 0");
  SimParams p;
  p.kappa = 1.0;
  p.alpha_mag = std::sqrt(n * p.kappa);
  p.eta = defaults.eta;
  p.seed = defaults.seed;
  p.chi = defaults.chi;
  if (defaults.dt) {
    p.dt = *defaults.dt;
  } else {
    p.dt = std::min(1e-3, 1e-2 / (p.alpha_mag * std::sqrt(p.kappa)));
    if (defaults.canonical_in_sweep) {
      p.dt = std::min(p.dt, 0.25 / (4.0 * p.alpha_mag * p.alpha_mag));
    }
    if (defaults.filter_in_sweep) {
      p.dt = std::min(p.dt, kFilterStepBound / (p.alpha_mag * p.alpha_mag));
    }
  }
  p.n_modes = defaults.n_modes ? *defaults.n_modes : default_modes(n);
  p.burn_in = steady_start(p);
  p.horizon = defaults.horizon ? *defaults.horizon : defaults.horizon_factor * p.burn_in;
  p.validate();
  return p;
}

int converge_modes(SchemeKind kind, const SimParams& params, double rel_tol, int max_modes) {
  if (!uses_filter(kind)) return params.n_modes;
  SimParams pilot = params;
  pilot.horizon = 2.0 * params.burn_in;
  TrajectoryOptions options;
  options.record = false;
  auto mean_sharpness = [&](int modes) {
    pilot.n_modes = modes;
    const HolevoAccumulator acc = run_trajectory(kind, pilot, 0, options).summary.total();
    return acc.sum_sharpness / static_cast<double>(acc.sharpness_count);
  };
  int modes = params.n_modes;
  while (2 * modes <= max_modes) {
    try {
      const double coarse = mean_sharpness(modes);
      const double fine = mean_sharpness(2 * modes);
      if (std::abs(coarse - fine) <= rel_tol * std::abs(fine)) return modes;
    } catch (const NumericalError&) {
      // A truncation too tight can break the sharpness bound; refine and retry.
    }
    modes *= 2;
  }
  return modes;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  spec.validate();
  const std::vector<double> grid = spec.n_grid.empty() ? default_n_grid() : spec.n_grid;
  const ResolveDefaults defaults = resolve_defaults(spec);

  struct Cell {
    SchemeKind kind;
    double n;
  };
  std::vector<Cell> cells;
  for (SchemeKind kind : spec.schemes) {
    for (double n : grid) cells.push_back({kind, n});
  }
  std::vector<SweepRow> rows(cells.size());
  std::atomic<std::size_t> next{0};

  auto run_cell = [&](std::size_t i) {
    const Cell& cell = cells[i];
    SweepRow& row = rows[i];
    row.scheme = cell.kind;
    row.n = cell.n;
    const auto start = std::chrono::steady_clock::now();
    try {
      SimParams params = resolve_params(cell.n, defaults);
      if (spec.check_truncation && !spec.n_modes) params.n_modes = converge_modes(cell.kind, params);
      row.dt_used = params.dt;
      row.j_used = uses_filter(cell.kind) ? params.n_modes : 0;
      const EnsembleResult res = run_ensemble(cell.kind, params, spec.n_traj, 1);
      row.v_h_ss = res.primary().value;
      row.std_error = res.primary().std_error;
      row.v_h_errors = res.v_errors.value;
      row.std_error_errors = res.v_errors.std_error;
      row.n_samples = res.v_errors.samples;
    } catch (const std::exception& e) {
      row.status = std::string("error: ") + e.what();
      row.v_h_ss = row.v_h_errors = std::nan("");
    }
    if (spec.timing) {
      row.wall_time =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
  };
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) run_cell(i);
  };
  const int workers = std::clamp<int>(spec.jobs, 1, static_cast<int>(cells.size()));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  if (!spec.out.empty()) {
    std::ofstream csv(spec.out, std::ios::binary);
    if (!csv) throw std::runtime_error("cannot open '" + spec.out + "' for writing");
    write_sweep_csv(csv, rows, spec.timing);
    std::ofstream rep(spec.out + ".report.txt", std::ios::binary);
    try {
      rep << report(rows);
    } catch (const ConfigError& e) {
      rep << "report unavailable: " << e.what() << '\n';
    }
    if (!csv || !rep) throw std::runtime_error("write to '" + spec.out + "' failed");
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows, bool with_timing) {
  os << kSweepCsvHeader << '\n';
  for (const auto& r : rows) {
    os << to_string(r.scheme) << ',' << format_number(r.n) << ',' << format_number(r.v_h_ss)
       << ',' << format_number(r.std_error) << ',' << format_number(r.v_h_errors) << ','
       << format_number(r.std_error_errors) << ',' << r.n_samples << ',' << r.j_used << ','
       << format_number(r.dt_used) << ',' << format_number(with_timing ? r.wall_time : 0.0) << ','
       << csv_field(r.status) << '\n';
  }
}

namespace {

std::optional<AsymptoteClass> asymptote_for(SchemeKind kind, double n) {
  const bool small = n <= 0.1;
  const bool large = n >= 100.0;
  switch (kind) {
    case SchemeKind::Canonical:
    case SchemeKind::OptimalHeterodyne:
      if (small) return AsymptoteClass::HeterodyneSmall;
      if (large) return AsymptoteClass::HeterodyneLarge;
      return std::nullopt;
    case SchemeKind::BWHeterodyne:
      if (large) return AsymptoteClass::HeterodyneLarge;
      return std::nullopt;
    case SchemeKind::SemiOptimalAdaptive:
    case SchemeKind::SimpleAdaptive:
      if (small) return AsymptoteClass::AdaptiveSmall;
      if (large) return AsymptoteClass::AdaptiveLarge;
      return std::nullopt;
    case SchemeKind::BWAdaptive: return std::nullopt;
  }
  return std::nullopt;
}

const SweepRow* find_row(const std::vector<SweepRow>& rows, double n,
                         std::initializer_list<SchemeKind> preference) {
  for (SchemeKind kind : preference) {
    for (const auto& r : rows) {
      if (r.scheme == kind && r.n == n && r.status == "ok" && std::isfinite(r.v_h_ss)) return &r;
    }
  }
  return nullptr;
}

}  // namespace

std::string report(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  char line[256];

  std::vector<double> ns;
  for (const auto& r : rows) {
    if (std::find(ns.begin(), ns.end(), r.n) == ns.end()) ns.push_back(r.n);
  }
  std::sort(ns.begin(), ns.end());

  os << "Heterodyne / adaptive ratio (bracket [" << format_number(kSmallFluxRatio - kRatioBracketTol)
     << ", " << format_number(kLargeFluxRatio + kRatioBracketTol) << "])\n";
  os << "        N      V_het   V_adapt     ratio  in_bracket\n";
  int pairs = 0;
  for (double n : ns) {
    const SweepRow* het = find_row(rows, n, {SchemeKind::OptimalHeterodyne, SchemeKind::Canonical,
                                             SchemeKind::BWHeterodyne});
    const SweepRow* ada = find_row(rows, n, {SchemeKind::SemiOptimalAdaptive,
                                             SchemeKind::SimpleAdaptive, SchemeKind::BWAdaptive});
    if (!het || !ada) continue;
    ++pairs;
    const double ratio = het->v_h_ss / ada->v_h_ss;
    const bool inside = ratio >= kSmallFluxRatio - kRatioBracketTol &&
                        ratio <= kLargeFluxRatio + kRatioBracketTol;
    std::snprintf(line, sizeof line, "%9.4g %10.4g %9.4g %9.4f  %s\n", n, het->v_h_ss,
                  ada->v_h_ss, ratio, inside ? "yes" : "NO");
    os << line;
  }
  if (pairs == 0) {
    throw ConfigError(
        "report needs, at some shared N, one non-adaptive row (optimal-heterodyne, canonical or "
        "bw-heterodyne) and one adaptive row (semi-optimal-adaptive, simple-adaptive or "
        "bw-adaptive) that completed");
  }

  os << "\nAsymptote comparison (tolerance 15% for N <= 0.1, 10% for N >= 100)\n";
  os << "scheme                       N    V_H_SS      asymptote  class              rel_dev  pass\n";
  int compared = 0;
  for (const auto& r : rows) {
    const auto cls = asymptote_for(r.scheme, r.n);
    if (!cls || r.status != "ok") continue;
    ++compared;
    const double target = asymptote(*cls, r.n);
    const double dev = (r.v_h_ss - target) / target;
    const double tol = r.n <= 0.1 ? 0.15 : 0.10;
    std::snprintf(line, sizeof line, "%-22s %9.4g %9.4g %14.4g  %-17s %+8.3f  %s\n",
                  std::string(to_string(r.scheme)).c_str(), r.n, r.v_h_ss, target,
                  std::string(to_string(*cls)).c_str(), dev, std::abs(dev) <= tol ? "yes" : "NO");
    os << line;
  }
  if (compared == 0) os << "(no completed row has N <= 0.1 or N >= 100)\n";
  int failed = 0;
  for (const auto& r : rows) failed += r.status != "ok";
  if (failed) os << '\n' << failed << " cell(s) failed; see the status column.\n";
  return os.str();
}

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  for (auto item : split_commas(text)) out.push_back(parse_double("list", item));
  return out;
}

std::vector<SchemeKind> parse_scheme_list(std::string_view text) {
  std::vector<SchemeKind> out;
  for (auto item : split_commas(text)) {
    if (item == "all") {
      out.assign(kAllSchemes.begin(), kAllSchemes.end());
      continue;
    }
    out.push_back(parse_scheme(item));
  }
  return out;
}

void apply_setting(RunConfig& config, std::string_view key_in, std::string_view value) {
  const auto key = trim(key_in);
  SweepSpec& s = config.sweep;
  TraceSpec& t = config.trace;
  if (key == "schemes") {
    s.schemes = parse_scheme_list(value);
  } else if (key == "n_grid") {
    s.n_grid = parse_number_list(value);
  } else if (key == "out") {
    s.out = std::string(trim(value));
  } else if (key == "n_traj") {
    s.n_traj = parse_int<int>(key, value);
  } else if (key == "seed") {
    s.seed = parse_int<std::uint64_t>(key, value);
  } else if (key == "jobs") {
    s.jobs = parse_int<int>(key, value);
  } else if (key == "horizon_factor") {
    s.horizon_factor = parse_double(key, value);
  } else if (key == "horizon") {
    s.horizon = parse_double(key, value);
    t.horizon = s.horizon;
  } else if (key == "eta") {
    s.eta = parse_double(key, value);
  } else if (key == "dt") {
    s.dt = parse_double(key, value);
  } else if (key == "n_modes") {
    s.n_modes = parse_int<int>(key, value);
  } else if (key == "chi") {
    s.chi = parse_double(key, value);
  } else if (key == "check_truncation") {
    s.check_truncation = parse_bool(key, value);
  } else if (key == "timing") {
    s.timing = parse_bool(key, value);
  } else if (key == "scheme") {
    t.scheme = parse_scheme(trim(value));
  } else if (key == "n") {
    t.n = parse_double(key, value);
  } else if (key == "stride") {
    t.stride = parse_int<std::uint64_t>(key, value);
  } else {
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
}

void load_config(std::istream& is, RunConfig& config) {
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    }
    try {
      apply_setting(config, view.substr(0, eq), view.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
}

void load_config_file(const std::string& path, RunConfig& config) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  load_config(in, config);
}

}  // namespace cwphase
