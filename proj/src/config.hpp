// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "error.hpp"
#include "json.hpp"

namespace swarmft {

/// One scheduled fault: the node hosting `target_task` starts a linear
/// temperature ramp at `ramp_start_ms`. A negative start means "anchored":
/// the engine materializes it when the configured fault round begins, so the
/// fault always lands mid-computation regardless of round duration.
struct FaultEntry {
  int target_task = 0;
  double ramp_start_ms = -1.0;
  double ramp_rate = 0.5;  // degrees per simulated ms
};

enum class ScheduleMode { Auto, None, File };
enum class TraceLevel { Off, Protocol, Full };

struct ExperimentConfig {
  // topology / workload
  int grid_rows = 4;
  int grid_cols = 5;
  bool grid_auto = false;  // size the smallest square that fits the task graph
  int leaves = 8;
  int fan_in = 2;
  int rounds = 150;

  // campaign
  int trials = 30;
  uint64_t base_seed = 42;

  // sensor simulation + prediction
  double baseline_temp = 40.0;
  double noise_sigma = 1.5;
  double threshold = 70.0;
  double ramp_rate = 0.5;
  double sensor_tick_ms = 10.0;
  double grace_window_ms = 1000.0;

  // migration cost model
  double spawn_cost_ms = 100.0;
  double transfer_cost_ms_per_value = 2.0;
  double rebind_cost_ms_per_dep = 8.0;
  double jitter_pct = 0.05;
  double hop_latency_ms = 1.0;
  double probe_timeout_ms = 10.0;
  double rebind_timeout_ms = 20.0;

  // task payload: number of per-round values a node retains (its working set)
  int history_window = 75;

  // fault injection
  ScheduleMode schedule_mode = ScheduleMode::Auto;
  std::string schedule_path;
  std::vector<FaultEntry> file_schedule;
  int fault_round = -1;  // <0 -> rounds / 2
  bool allow_concurrent_faults = false;

  TraceLevel trace_level = TraceLevel::Protocol;

  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig from_json_text(const std::string& text);
  nlohmann::json to_json() const;

  /// Total node count of the configured reduction tree.
  int task_node_count() const;
  int resolved_fault_round() const { return fault_round >= 0 ? fault_round : rounds / 2; }

  /// Applies auto grid sizing (smallest square holding the task graph).
  void resolve_grid();

  /// Loads `schedule_path` into `file_schedule` when the mode requires it.
  void load_schedule_file();

  /// Throws ConfigInvalid on any violated constraint.
  void validate() const;
};

const char* to_string(ScheduleMode m);
const char* to_string(TraceLevel l);

}  // namespace swarmft
