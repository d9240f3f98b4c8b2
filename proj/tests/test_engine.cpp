// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "engine.hpp"
#include "validate.hpp"

using namespace swarmft;

namespace {

ExperimentConfig defaults() { return ExperimentConfig{}; }

const EvTransferStart* find_transfer(const TrialTrace& trace, int agent) {
  for (const auto& ev : trace.events) {
    if (const auto* t = std::get_if<EvTransferStart>(&ev.body)) {
      if (t->agent == agent) return t;
    }
  }
  return nullptr;
}

}  // namespace

TEST_SUITE("engine.sensors") {

TEST_CASE("unscheduled node readings stay at the baseline") {
  const auto cfg = defaults();
  Rng rng(derive_seed(7, 1000));
  const int n = 100000;
  double sum = 0.0, sum_sq = 0.0, max_dev = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto r = sample_temperature({0, 0}, i * 10.0, {}, cfg, rng);
    const double dev = r.temperature - cfg.baseline_temp;
    sum += dev;
    sum_sq += dev * dev;
    max_dev = std::max(max_dev, std::abs(dev));
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sum_sq / n - mean * mean);
  CHECK(std::abs(mean) < 0.025);          // 4 sigma of the sample mean
  CHECK(sd > 1.48);
  CHECK(sd < 1.52);
  CHECK(max_dev < 6.0 * cfg.noise_sigma);  // frozen seed keeps this stable
}

TEST_CASE("before the ramp a scheduled node looks like the baseline") {
  const auto cfg = defaults();
  const std::vector<ActiveRamp> ramps{{{1, 1}, 500.0, 0.5}};
  Rng a(derive_seed(11, 1000)), b(derive_seed(12, 1000));
  const int n = 10000;
  double sum_sched = 0.0, sum_plain = 0.0;
  for (int i = 0; i < n; ++i) {
    sum_sched += sample_temperature({1, 1}, 100.0, ramps, cfg, a).temperature;
    sum_plain += sample_temperature({0, 0}, 100.0, {}, cfg, b).temperature;
  }
  CHECK(std::abs(sum_sched / n - sum_plain / n) < 0.1);  // two-sample mean gap
}

TEST_CASE("long after the ramp start the reading dominates the threshold") {
  const auto cfg = defaults();
  const std::vector<ActiveRamp> ramps{{{1, 1}, 100.0, 0.5}};
  Rng rng(derive_seed(5, 1000));
  for (int i = 0; i < 100; ++i) {
    const auto r = sample_temperature({1, 1}, 400.0, ramps, cfg, rng);
    CHECK(r.temperature > cfg.threshold);
  }
}

TEST_CASE("a ramped node is predicted within a finite window") {
  const auto cfg = defaults();
  const std::vector<ActiveRamp> ramps{{{2, 2}, 100.0, 0.5}};
  Rng rng(derive_seed(21, 1000));
  double first = -1.0;
  for (double t = 10.0; t <= 500.0; t += cfg.sensor_tick_ms) {
    if (predict_failure(sample_temperature({2, 2}, t, ramps, cfg, rng), cfg.threshold)) {
      first = t;
      break;
    }
  }
  REQUIRE(first > 0.0);
  CHECK(first > 100.0);
  CHECK(first < 100.0 + 2.0 * (cfg.threshold - cfg.baseline_temp) / 0.5);
}

TEST_CASE("prediction is strictly above the threshold") {
  CHECK_FALSE(predict_failure(SensorReading{{0, 0}, 70.0, 0.0}, 70.0));
  CHECK(predict_failure(SensorReading{{0, 0}, 70.1, 0.0}, 70.0));
}

}  // TEST_SUITE

TEST_SUITE("engine.trials") {

TEST_CASE("failure-free trial reproduces the reference reduction") {
  auto cfg = defaults();
  cfg.schedule_mode = ScheduleMode::None;
  cfg.rounds = 40;
  const auto out = run_trial(cfg, 123);
  CHECK(out.survived);
  CHECK(out.migrations.empty());
  REQUIRE(out.round_results.size() == 40);
  CHECK(out.round_results == out.round_expected);
}

TEST_CASE("single fault on the first third-level node") {
  auto cfg = defaults();
  TrialTrace trace;
  const auto out = run_trial(cfg, 42, 0, {FaultEntry{13, -1.0, cfg.ramp_rate}}, &trace);

  CHECK(out.survived);
  CHECK(out.reason == FailReason::None);
  REQUIRE(out.migrations.size() == 1);
  const auto& rec = out.migrations.front();
  CHECK(rec.task_id == 13);
  CHECK(rec.from == Coord{2, 2});  // task 13 lives on physical node 12 of the 4x5 grid
  CHECK(chebyshev(rec.from, rec.to) == 1);
  CHECK(rec.rebind_count == 3);  // two inputs plus one output
  CHECK(rec.end_time > rec.start_time);
  CHECK(rec.end_time - rec.prediction_time <= cfg.grace_window_ms);

  REQUIRE(out.round_results.size() == static_cast<size_t>(cfg.rounds));
  CHECK(out.round_results == out.round_expected);

  // anchored ramp was materialized to a concrete start
  REQUIRE(out.schedule.size() == 1);
  CHECK(out.schedule.front().ramp_start_ms > 0.0);

  // the transferred payload is the node's bounded working set
  const auto* transfer = find_transfer(trace, 13);
  REQUIRE(transfer != nullptr);
  CHECK(static_cast<int>(transfer->payload.size()) == cfg.history_window);
}

TEST_CASE("leaf migration rebinds its feed and its output") {
  auto cfg = defaults();
  const auto out = run_trial(cfg, 7, 0, {FaultEntry{1, 200.0, cfg.ramp_rate}});
  CHECK(out.survived);
  REQUIRE(out.migrations.size() == 1);
  CHECK(out.migrations.front().task_id == 1);
  CHECK(out.migrations.front().rebind_count == 2);
  CHECK(out.round_results == out.round_expected);
}

TEST_CASE("root migration notifies only its input dependencies") {
  auto cfg = defaults();
  const auto out = run_trial(cfg, 9, 0, {FaultEntry{15, -1.0, cfg.ramp_rate}});
  CHECK(out.survived);
  REQUIRE(out.migrations.size() == 1);
  CHECK(out.migrations.front().rebind_count == 2);  // tasks 13 and 14, no consumer
  CHECK(out.round_results == out.round_expected);
}

TEST_CASE("a node whose neighbors all failed leaves no escape route") {
  auto cfg = defaults();
  cfg.grid_rows = 1;
  cfg.grid_cols = 3;
  cfg.leaves = 2;
  cfg.rounds = 800;
  TrialTrace trace;
  // first ramp takes out the middle node; the second then traps the corner
  const std::vector<FaultEntry> plan{{2, 100.0, cfg.ramp_rate}, {3, 1500.0, cfg.ramp_rate}};
  const auto out = run_trial(cfg, 31, 0, plan, &trace);

  CHECK_FALSE(out.survived);
  CHECK(out.reason == FailReason::NoEscapeRoute);

  // whoever was resident on the trapped cell perceived an empty neighborhood
  bool saw_empty_perception = false;
  bool saw_no_escape = false;
  for (const auto& ev : trace.events) {
    if (const auto* p = std::get_if<EvPerception>(&ev.body)) {
      if (p->alive_nodes == 0) saw_empty_perception = true;
    }
    if (std::get_if<EvNoEscape>(&ev.body)) saw_no_escape = true;
  }
  CHECK(saw_empty_perception);
  CHECK(saw_no_escape);
}

TEST_CASE("hard failure during state transfer loses the trial") {
  auto cfg = defaults();
  cfg.transfer_cost_ms_per_value = 50.0;  // stretch the transfer window
  cfg.grace_window_ms = 300.0;
  const auto out = run_trial(cfg, 5, 0, {FaultEntry{13, 0.0, cfg.ramp_rate}});
  CHECK_FALSE(out.survived);
  CHECK(out.reason == FailReason::TransferIncomplete);
}

TEST_CASE("a grace window shorter than the spawn dooms the trial") {
  auto cfg = defaults();
  cfg.grace_window_ms = 50.0;
  const auto out = run_trial(cfg, 5, 0, {FaultEntry{13, 0.0, cfg.ramp_rate}});
  CHECK_FALSE(out.survived);
  CHECK(out.reason == FailReason::GraceWindowExceeded);
}

TEST_CASE("unacknowledged rebinds fail after one retry") {
  auto cfg = defaults();
  cfg.rebind_timeout_ms = 0.5;  // below the ack round trip
  const auto out = run_trial(cfg, 5, 0, {FaultEntry{13, 0.0, cfg.ramp_rate}});
  CHECK_FALSE(out.survived);
  CHECK(out.reason == FailReason::AckTimeout);
}

TEST_CASE("identical seeds reproduce the trial exactly") {
  auto cfg = defaults();
  cfg.rounds = 60;
  const std::vector<FaultEntry> plan{{11, -1.0, cfg.ramp_rate}};
  TrialTrace t1, t2;
  const auto a = run_trial(cfg, 99, 0, plan, &t1);
  const auto b = run_trial(cfg, 99, 0, plan, &t2);

  CHECK(a.round_results == b.round_results);
  REQUIRE(a.migrations.size() == b.migrations.size());
  for (size_t i = 0; i < a.migrations.size(); ++i) {
    CHECK(a.migrations[i].start_time == b.migrations[i].start_time);
    CHECK(a.migrations[i].end_time == b.migrations[i].end_time);
    CHECK(a.migrations[i].to == b.migrations[i].to);
  }
  std::ostringstream s1, s2;
  write_trace_jsonl(t1, s1, TraceLevel::Full);
  write_trace_jsonl(t2, s2, TraceLevel::Full);
  CHECK(s1.str() == s2.str());
  CHECK_FALSE(s1.str().empty());
}

TEST_CASE("different seeds vary the timings") {
  auto cfg = defaults();
  cfg.rounds = 60;
  const std::vector<FaultEntry> plan{{11, -1.0, cfg.ramp_rate}};
  const auto a = run_trial(cfg, 1, 0, plan);
  const auto b = run_trial(cfg, 2, 0, plan);
  REQUIRE(a.migrations.size() == 1);
  REQUIRE(b.migrations.size() == 1);
  CHECK(a.migrations[0].end_time != b.migrations[0].end_time);
}

TEST_CASE("auto campaigns cover every computational node") {
  auto cfg = defaults();
  cfg.trials = 2;
  cfg.rounds = 60;
  const auto campaign = run_campaign(cfg);
  REQUIRE(campaign.outcomes.size() == 14);  // 7 nodes x 2 trials
  CHECK(campaign.failed_count() == 0);
  CHECK(campaign.migration_count() == 14);
  const std::vector<int> nodes{9, 10, 11, 12, 13, 14, 15};
  for (size_t i = 0; i < campaign.outcomes.size(); ++i) {
    const auto& o = campaign.outcomes[i];
    CHECK(o.trial_id == static_cast<int>(i));
    CHECK(o.seed == cfg.base_seed + i);
    REQUIRE(o.schedule.size() == 1);
    CHECK(o.schedule.front().target_task == nodes[i / 2]);
    REQUIRE(o.migrations.size() == 1);
    CHECK(o.migrations.front().task_id == nodes[i / 2]);
  }
}

TEST_CASE("a campaign with no schedule survives with no migrations") {
  auto cfg = defaults();
  cfg.schedule_mode = ScheduleMode::None;
  cfg.trials = 3;
  cfg.rounds = 30;
  const auto campaign = run_campaign(cfg);
  CHECK(campaign.outcomes.size() == 3);
  CHECK(campaign.failed_count() == 0);
  CHECK(campaign.migration_count() == 0);
}

TEST_CASE("invalid configurations are rejected up front") {
  auto cfg = defaults();
  cfg.grid_rows = 2;
  cfg.grid_cols = 2;  // cannot hold 15 tasks
  CHECK_THROWS_AS(run_campaign(cfg), Error);
  try {
    run_campaign(cfg);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ConfigInvalid);
  }
}

TEST_CASE("every protocol trial passes the trace validator") {
  auto cfg = defaults();
  cfg.rounds = 60;
  for (int target : {9, 13, 15}) {
    TrialTrace trace;
    const auto out = run_trial(cfg, 1000 + target, 0, {FaultEntry{target, -1.0, cfg.ramp_rate}},
                               &trace);
    ExperimentConfig resolved = cfg;
    resolved.resolve_grid();
    const auto violations = validate_trial(trace, out, resolved);
    for (const auto& v : violations) {
      CAPTURE(v.what);
      CHECK(false);
    }
    CHECK(violations.empty());
  }
}

}  // TEST_SUITE
