#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "cwphase/analytics.hpp"
#include "cwphase/errors.hpp"
#include "cwphase/schemes.hpp"

using namespace cwphase;

namespace {

SimParams small_run(double n, double horizon = 30.0) {
  SimParams p;
  p.alpha_mag = std::sqrt(n);
  p.dt = 1e-3;
  p.n_modes = 16;
  p.burn_in = std::min(10.0, horizon / 2);
  p.horizon = horizon;
  p.seed = 5;
  return p;
}

bool same_records(const std::vector<StepRecord>& a, const std::vector<StepRecord>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].t != b[i].t || a[i].phi_true != b[i].phi_true || a[i].phi_hat != b[i].phi_hat ||
        a[i].sharpness != b[i].sharpness || a[i].lo_phase != b[i].lo_phase) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_SUITE("schemes_engine") {
  TEST_CASE("scheme names round-trip") {
    for (SchemeKind k : kAllSchemes) CHECK(parse_scheme(to_string(k)) == k);
    CHECK_THROWS_AS(parse_scheme("homodyne"), ConfigError);
    CHECK(uses_filter(SchemeKind::Canonical));
    CHECK_FALSE(uses_filter(SchemeKind::SimpleAdaptive));
    CHECK(is_adaptive(SchemeKind::BWAdaptive));
    CHECK_FALSE(is_adaptive(SchemeKind::OptimalHeterodyne));
  }

  TEST_CASE("trajectories are reproducible and streams are distinct") {
    const SimParams p = small_run(1.0, 2.0);
    for (SchemeKind k : kAllSchemes) {
      CAPTURE(to_string(k));
      const auto a = run_trajectory(k, p, 3);
      const auto b = run_trajectory(k, p, 3);
      const auto c = run_trajectory(k, p, 4);
      CHECK(same_records(a.records, b.records));
      CHECK_FALSE(same_records(a.records, c.records));
      CHECK(a.records.size() == p.total_steps());
    }
    // Different schemes at the same stream index see different noise.
    const auto s = run_trajectory(SchemeKind::SimpleAdaptive, p, 0);
    const auto h = run_trajectory(SchemeKind::SemiOptimalAdaptive, p, 0);
    CHECK(s.records[10].phi_true != h.records[10].phi_true);
  }

  TEST_CASE("record fields per scheme") {
    const SimParams p = small_run(1.0, 0.1);
    for (SchemeKind k : kAllSchemes) {
      CAPTURE(to_string(k));
      const auto r = run_trajectory(k, p, 0);
      REQUIRE_FALSE(r.records.empty());
      CHECK(r.records.back().sharpness.has_value() == uses_filter(k));
      CHECK(r.records.back().lo_phase.has_value() == is_adaptive(k));
      CHECK(r.modes_used == (uses_filter(k) ? p.n_modes : 0));
      for (const auto& rec : r.records) {
        REQUIRE(rec.phi_hat >= -kPi);
        REQUIRE(rec.phi_hat < kPi);
      }
    }
  }

  TEST_CASE("semi-optimal feedback keeps Phi = phi_hat + pi/2") {
    const auto r = run_trajectory(SchemeKind::SemiOptimalAdaptive, small_run(1.0, 1.0), 0);
    for (const auto& rec : r.records) {
      REQUIRE(std::remainder(*rec.lo_phase - rec.phi_hat - kPi / 2, kTwoPi) ==
              doctest::Approx(0.0).scale(1).epsilon(1e-9));
    }
    const auto s = run_trajectory(SchemeKind::SimpleAdaptive, small_run(1.0, 1.0), 0);
    for (const auto& rec : s.records) {
      REQUIRE(std::remainder(*rec.lo_phase - rec.phi_hat - kPi / 2, kTwoPi) ==
              doctest::Approx(0.0).scale(1).epsilon(1e-9));
    }
  }

  TEST_CASE("record stride and observer") {
    const SimParams p = small_run(1.0, 1.0);
    TrajectoryOptions opt;
    opt.record_stride = 10;
    std::uint64_t calls = 0;
    bool saw_filter = false;
    opt.observer = [&](const StepRecord&, const FourierFilterState* f) {
      ++calls;
      saw_filter = saw_filter || f != nullptr;
    };
    const auto r = run_trajectory(SchemeKind::OptimalHeterodyne, p, 0, opt);
    CHECK(calls == p.total_steps());
    CHECK(saw_filter);
    CHECK(r.records.size() == p.total_steps() / 10);
    CHECK(r.records.front().t == doctest::Approx(10 * p.dt));

    saw_filter = false;
    run_trajectory(SchemeKind::BWHeterodyne, p, 0, opt);
    CHECK_FALSE(saw_filter);
  }

  TEST_CASE("steady-state blocks: counts and burn-in") {
    const SimParams p = small_run(1.0, 20.0);
    TrajectoryOptions opt;
    opt.record = false;
    const auto r = run_trajectory(SchemeKind::SimpleAdaptive, p, 0, opt);
    const auto total = r.summary.total();
    CHECK(total.count == p.total_steps() - static_cast<std::uint64_t>(std::llround(p.burn_in / p.dt)));
    const std::uint64_t block = bootstrap_block_steps(p);
    CHECK(block == static_cast<std::uint64_t>(std::llround(5.0 / window_rate(p) / p.dt)));
    CHECK(r.summary.blocks.size() == (total.count + block - 1) / block);
  }

  TEST_CASE("merging summaries is order independent") {
    const SimParams p = small_run(1.0, 12.0);
    TrajectoryOptions opt;
    opt.record = false;
    SteadyStateSummary s[3];
    for (int i = 0; i < 3; ++i) {
      s[i] = run_trajectory(SchemeKind::OptimalHeterodyne, p, i, opt).summary;
    }
    SteadyStateSummary a = s[0];
    a.merge(s[1]).merge(s[2]);
    SteadyStateSummary b = s[2];
    SteadyStateSummary c = s[1];
    c.merge(s[0]);
    b.merge(c);
    REQUIRE(a.blocks.size() == b.blocks.size());
    for (std::size_t i = 0; i < a.blocks.size(); ++i) {
      CHECK(a.blocks[i].stream == b.blocks[i].stream);
      CHECK(a.blocks[i].index == b.blocks[i].index);
      CHECK(a.blocks[i].acc.sum_phasor == b.blocks[i].acc.sum_phasor);
    }
    const auto ea = summarize(SchemeKind::OptimalHeterodyne, a, 1);
    const auto eb = summarize(SchemeKind::OptimalHeterodyne, b, 1);
    CHECK(ea.primary().value == eb.primary().value);
    CHECK(ea.primary().std_error == eb.primary().std_error);
  }

  TEST_CASE("ensembles do not depend on the number of workers") {
    const SimParams p = small_run(1.0, 12.0);
    const auto serial = run_ensemble(SchemeKind::SemiOptimalAdaptive, p, 3, 1);
    const auto parallel = run_ensemble(SchemeKind::SemiOptimalAdaptive, p, 3, 3);
    CHECK(serial.primary().value == parallel.primary().value);
    CHECK(serial.v_errors.value == parallel.v_errors.value);
    CHECK(serial.v_errors.std_error == parallel.v_errors.std_error);
    REQUIRE(serial.v_sharpness.has_value());
    const auto simple = run_ensemble(SchemeKind::SimpleAdaptive, p, 1);
    CHECK_FALSE(simple.v_sharpness.has_value());
    CHECK(&simple.primary() == &simple.v_errors);
  }

  TEST_CASE("failures propagate out of the ensemble") {
    SimParams p = small_run(1000.0, 12.0);
    p.dt = 1e-2;  // 2 |alpha| sqrt(dt) > 1
    CHECK_THROWS_AS(run_ensemble(SchemeKind::Canonical, p, 2, 2), ConfigError);
    p.dt = 1e-3;
    SteadyStateSummary empty;
    CHECK_THROWS_AS(summarize(SchemeKind::SimpleAdaptive, empty, 1), ConfigError);
  }

  TEST_CASE("simple adaptive homes in and locks at N = 1000") {
    SimParams p;
    p.alpha_mag = std::sqrt(1000.0);
    p.dt = 1e-2 / p.alpha_mag;
    p.burn_in = 20.0;
    p.horizon = 120.0;
    const auto r = run_ensemble(SchemeKind::SimpleAdaptive, p, 1);
    CHECK(r.primary().value == doctest::Approx(asymptote(AsymptoteClass::AdaptiveLarge, 1000.0)).epsilon(0.15));
  }

  TEST_CASE("BW adaptive estimate tracks the phase at N = 100") {
    SimParams p;
    p.alpha_mag = 10.0;
    p.dt = 1e-3;
    p.burn_in = 20.0;
    p.horizon = 100.0;
    const auto r = run_ensemble(SchemeKind::BWAdaptive, p, 1);
    CHECK(r.primary().value < 0.5);
  }

  TEST_CASE("trace CSV") {
    std::vector<StepRecord> recs(2);
    recs[0] = {0.001, 0.5, 0.25, 0.75, std::nullopt};
    recs[1] = {0.002, 0.5, 0.25, std::nullopt, 1.75};
    std::ostringstream os;
    write_trace_csv(os, recs);
    CHECK(os.str() == "t,phi_true,phi_hat,Phi,sharpness\n0.001,0.5,0.25,,0.75\n0.002,0.5,0.25,1.75,\n");
  }
}
