// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "agent.hpp"
#include "config.hpp"
#include "rng.hpp"
#include "taskgraph.hpp"
#include "topology.hpp"
#include "trace.hpp"

namespace swarmft {

/// A materialized fault ramp bound to a grid cell.
struct ActiveRamp {
  Coord node;
  double ramp_start_ms = 0.0;
  double ramp_rate = 0.5;
};

/// Simulated temperature at `node` and `time_ms`: baseline plus Gaussian
/// sensor noise, plus the linear ramp contribution of any active fault.
SensorReading sample_temperature(Coord node, double time_ms, const std::vector<ActiveRamp>& ramps,
                                 const ExperimentConfig& cfg, Rng& noise_rng);

/// Failure is predicted strictly above the threshold; equality does not fire.
bool predict_failure(const SensorReading& reading, double threshold);

struct TrialOutcome {
  int trial_id = 0;
  uint64_t seed = 0;
  bool survived = true;
  FailReason reason = FailReason::None;
  std::string fail_detail;
  std::vector<double> round_results;
  std::vector<double> round_expected;
  std::vector<MigrationRecord> migrations;
  std::vector<FaultEntry> schedule;  // ramp starts resolved to concrete ms
  std::string trace_path;
};

/// Runs one trial: `rounds` reduction rounds with the given fault entries
/// injected. Deterministic in (config, seed). When `trace` is non-null the
/// full event trace is collected into it.
TrialOutcome run_trial(const ExperimentConfig& cfg, uint64_t seed, int trial_id,
                       const std::vector<FaultEntry>& schedule, TrialTrace* trace = nullptr);

/// Convenience overload: derives the trial's fault entries from the config
/// (none/file; auto targets the first computational node).
TrialOutcome run_trial(const ExperimentConfig& cfg, uint64_t seed);

struct CampaignResult {
  ExperimentConfig config;
  std::vector<TrialOutcome> outcomes;

  int failed_count() const;
  int migration_count() const;
};

using TrialObserver = std::function<void(const TrialOutcome&, const TrialTrace&)>;

/// Runs the configured campaign with derived seeds base_seed + trial_id.
///
/// Schedule expansion: `auto` runs `trials` trials per computational node,
/// each with a single ramp anchored at the fault round (node-major order);
/// `none` and `file` run `trials` trials of the configured schedule.
/// Per-trial errors become failed outcomes; the campaign never aborts.
CampaignResult run_campaign(const ExperimentConfig& cfg, const TrialObserver& observer = {});

}  // namespace swarmft
