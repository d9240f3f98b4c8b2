// SPDX-License-Identifier: Apache-2.0
#include "metrics.hpp"

#include <algorithm>
#include <numeric>

namespace swarmft {

namespace {

void sort_node_ids(std::vector<int>& ids, const std::map<int, int>& levels) {
  std::sort(ids.begin(), ids.end(), [&](int a, int b) {
    const int la = levels.at(a), lb = levels.at(b);
    if (la != lb) return la < lb;
    return a < b;
  });
}

}  // namespace

SampleMatrix SampleMatrix::from_campaign(const CampaignResult& campaign) {
  SampleMatrix m;
  for (const auto& o : campaign.outcomes) {
    if (!o.survived) {
      m.excluded_failed += std::max<int>(1, static_cast<int>(o.migrations.size()));
      continue;
    }
    for (const auto& r : o.migrations) {
      if (!m.samples.count(r.task_id)) {
        m.node_ids.push_back(r.task_id);
        m.node_level[r.task_id] = r.level;
      }
      m.samples[r.task_id].push_back(r.end_time - r.start_time);
    }
  }
  sort_node_ids(m.node_ids, m.node_level);
  return m;
}

int SampleMatrix::trials() const {
  if (empty()) fail(Errc::IncompleteData, "sample matrix is empty");
  size_t n = samples.at(node_ids.front()).size();
  for (int id : node_ids) {
    if (samples.at(id).size() != n) {
      fail(Errc::IncompleteRow, "node " + std::to_string(id) + " has " +
                                    std::to_string(samples.at(id).size()) +
                                    " samples while others have " + std::to_string(n));
    }
  }
  return static_cast<int>(n);
}

double mean_node_time(const SampleMatrix& m, int node_id) {
  auto it = m.samples.find(node_id);
  if (it == m.samples.end()) fail(Errc::UnknownNode, "node " + std::to_string(node_id));
  const auto& row = it->second;
  if (row.empty()) fail(Errc::IncompleteRow, "node " + std::to_string(node_id) + " has no samples");
  return std::accumulate(row.begin(), row.end(), 0.0) / static_cast<double>(row.size());
}

std::map<int, double> per_node_means(const SampleMatrix& m) {
  std::map<int, double> out;
  for (int id : m.node_ids) out[id] = mean_node_time(m, id);
  return out;
}

double mean_level_time(const std::map<int, double>& per_node, const TaskGraph& graph, int level) {
  double sum = 0.0;
  int count = 0;
  for (int id : graph.level_ids(level)) {
    auto it = per_node.find(id);
    if (it == per_node.end()) {
      fail(Errc::MissingNodeMean, "no per-node mean for node " + std::to_string(id));
    }
    sum += it->second;
    ++count;
  }
  if (count == 0) fail(Errc::MissingNodeMean, "level " + std::to_string(level) + " has no nodes");
  return sum / static_cast<double>(count);
}

double mean_level_time(const SampleMatrix& m, int level) {
  double sum = 0.0;
  int count = 0;
  for (int id : m.node_ids) {
    if (m.node_level.at(id) != level) continue;
    sum += mean_node_time(m, id);
    ++count;
  }
  if (count == 0) fail(Errc::MissingNodeMean, "no nodes at level " + std::to_string(level));
  return sum / static_cast<double>(count);
}

MetricsTable MetricsTable::compute(const SampleMatrix& m) {
  if (m.empty()) fail(Errc::IncompleteData, "no samples to aggregate");
  MetricsTable t;
  t.node_ids = m.node_ids;
  t.node_level = m.node_level;
  t.trials = m.trials();
  t.excluded_failed = m.excluded_failed;
  t.per_node = per_node_means(m);

  for (int id : t.node_ids) {
    const int level = t.node_level.at(id);
    if (std::find(t.levels.begin(), t.levels.end(), level) == t.levels.end()) {
      t.levels.push_back(level);
    }
  }
  std::sort(t.levels.begin(), t.levels.end());
  for (int level : t.levels) t.per_level[level] = mean_level_time(m, level);

  double sum_nodes = 0.0;
  for (const auto& [id, v] : t.per_node) sum_nodes += v;
  t.overall.by_node = sum_nodes / static_cast<double>(t.per_node.size());
  double sum_levels = 0.0;
  for (const auto& [level, v] : t.per_level) sum_levels += v;
  t.overall.by_level = sum_levels / static_cast<double>(t.per_level.size());
  return t;
}

OverallMean overall_mean(const MetricsTable& t) {
  if (t.per_node.empty() || t.per_level.empty()) {
    fail(Errc::MissingEntries, "per-node and per-level tables must be complete");
  }
  return t.overall;
}

std::vector<SweepRow> dependency_sweep(const ExperimentConfig& base, int fan_in_min,
                                       int fan_in_max) {
  if (fan_in_min < 2 || fan_in_max < fan_in_min) {
    fail(Errc::ConfigInvalid, "fan-in range must satisfy 2 <= min <= max");
  }
  std::vector<SweepRow> rows;
  for (int f = fan_in_min; f <= fan_in_max; ++f) {
    ExperimentConfig cfg = base;
    cfg.fan_in = f;
    cfg.leaves = f * f;
    cfg.grid_auto = true;
    cfg.schedule_mode = ScheduleMode::Auto;
    cfg.resolve_grid();

    const CampaignResult campaign = run_campaign(cfg);
    double sum = 0.0;
    int n = 0;
    for (const auto& o : campaign.outcomes) {
      if (!o.survived) continue;
      for (const auto& r : o.migrations) {
        sum += r.end_time - r.start_time;
        ++n;
      }
    }
    if (n == 0) {
      fail(Errc::IncompleteData,
           "fan-in " + std::to_string(f) + " produced no surviving migrations");
    }
    rows.push_back(SweepRow{f, f + 1, sum / static_cast<double>(n), n});
  }
  return rows;
}

}  // namespace swarmft
