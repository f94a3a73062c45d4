#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cwphase/schemes.hpp"

namespace cwphase {

/// Outcome of one acceptance criterion.
struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;  ///< measured values, targets and tolerances
};

/// One-line rendering: "PASS  7  <title>: <detail>".
std::string format_result(const CriterionResult& r);

inline constexpr int kCriterionCount = 15;

struct AcceptanceOptions {
  std::uint64_t seed = 20261019;
  int jobs = 1;
};

/// Runs the acceptance criteria. Stochastic runs are shared between criteria
/// that need the same (scheme, N) cell, so running several criteria through
/// one suite is cheaper than running them separately.
class AcceptanceSuite {
 public:
  explicit AcceptanceSuite(AcceptanceOptions options = {});

  /// Runs criterion `id` (1-based). Throws ConfigError for an unknown id.
  CriterionResult run(int id);
  std::vector<CriterionResult> run_all();

  /// Pinned steady-state run for (kind, N); cached.
  const EnsembleResult& ensemble(SchemeKind kind, double n);
  /// Parameters used for that run.
  SimParams params_for(SchemeKind kind, double n) const;

 private:
  AcceptanceOptions options_;
  std::map<std::pair<int, double>, EnsembleResult> cache_;
};

}  // namespace cwphase
