// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <vector>

#include "engine.hpp"
#include "error.hpp"
#include "taskgraph.hpp"

namespace swarmft {

/// Per-node reinstatement-time samples, one row per measured node. Units are
/// whatever the ingested data used (simulated ms from campaigns, seconds for
/// externally supplied data).
struct SampleMatrix {
  std::vector<int> node_ids;             // level-ascending, then id-ascending
  std::map<int, int> node_level;
  std::map<int, std::vector<double>> samples;
  int excluded_failed = 0;               // rows dropped because the trial failed

  static SampleMatrix from_campaign(const CampaignResult& campaign);

  int trials() const;                    // common row length; IncompleteRow if ragged
  bool empty() const { return node_ids.empty(); }
};

/// Arithmetic mean of one node's sample row.
double mean_node_time(const SampleMatrix& m, int node_id);

std::map<int, double> per_node_means(const SampleMatrix& m);

/// Mean of the per-node means across the computational nodes of `level`.
double mean_level_time(const std::map<int, double>& per_node, const TaskGraph& graph, int level);

/// Same aggregation driven by the matrix's own level column.
double mean_level_time(const SampleMatrix& m, int level);

struct OverallMean {
  double by_node = 0.0;   // canonical: mean over per-node means
  double by_level = 0.0;  // mean over per-level means (differs when levels are uneven)
};

struct MetricsTable {
  std::vector<int> node_ids;
  std::map<int, int> node_level;
  std::map<int, double> per_node;
  std::vector<int> levels;
  std::map<int, double> per_level;
  OverallMean overall;
  int trials = 0;
  int excluded_failed = 0;

  static MetricsTable compute(const SampleMatrix& m);
};

OverallMean overall_mean(const MetricsTable& t);

struct SweepRow {
  int fan_in = 0;
  int total_dependencies = 0;        // input deps of an internal node plus its output
  double mean_reinstatement_ms = 0;  // over all migrations of the fan-in's campaign
  int samples = 0;
};

/// Runs one campaign per fan-in in [fan_in_min, fan_in_max] on trees with
/// fan_in^2 leaves and auto-sized grids, and reports the mean migration
/// duration against the total dependency count.
std::vector<SweepRow> dependency_sweep(const ExperimentConfig& base, int fan_in_min,
                                       int fan_in_max);

}  // namespace swarmft
