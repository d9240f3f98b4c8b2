// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "engine.hpp"
#include "metrics.hpp"

namespace swarmft {

/// Campaign summary CSV. Header:
///   trial_id,seed,node_id,level,t_start_ms,t_end_ms,rebinds,survived
/// One row per migration; trials whose fault never produced a completed
/// migration get a row with empty time fields so failures stay visible.
std::string campaign_csv(const CampaignResult& campaign);

/// Parses reinstatement samples from CSV text. Two dialects are accepted,
/// detected by header: the campaign summary above (durations are
/// t_end_ms - t_start_ms of surviving rows), and a bare samples table
/// with header node_id,level,sample (values taken as-is, any unit).
SampleMatrix parse_samples_csv(const std::string& text);
SampleMatrix read_samples_csv(const std::string& path);

std::string render_table_text(const MetricsTable& t);
std::string render_table_csv(const MetricsTable& t);

/// Per-level sample CSV: one row per trial, one column per node of the
/// level, plus the level mean as a constant column.
std::string level_times_csv(const SampleMatrix& m, const MetricsTable& t, int level);

std::string sweep_csv(const std::vector<SweepRow>& rows);

/// Writes table.txt, table.csv and level<p>_times.csv files into `out_dir`.
void write_report_files(const SampleMatrix& m, const MetricsTable& t, const std::string& out_dir);

/// Runs the configured campaign and writes campaign.csv plus per-trial
/// traces (traces/trial_NNNN.jsonl, honoring the config's trace level)
/// into `out_dir`. With an empty out_dir nothing is written.
CampaignResult run_simulation(const ExperimentConfig& cfg, const std::string& out_dir);

}  // namespace swarmft
