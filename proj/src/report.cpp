// SPDX-License-Identifier: Apache-2.0
#include "report.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace swarmft {

namespace {

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

std::string fmt_ms(double v) { return fmt("%.3f", v); }
std::string fmt_val(double v) { return fmt("%.6f", v); }

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) fail(Errc::ParseError, "trailing characters in " + what + ": '" + s + "'");
    return v;
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    fail(Errc::ParseError, "bad " + what + ": '" + s + "'");
  }
}

int parse_int(const std::string& s, const std::string& what) {
  return static_cast<int>(parse_double(s, what));
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::IoError, "cannot write " + path.string());
  out << content;
}

}  // namespace

std::string campaign_csv(const CampaignResult& campaign) {
  std::ostringstream out;
  out << "trial_id,seed,node_id,level,t_start_ms,t_end_ms,rebinds,survived\n";
  TaskGraph graph =
      TaskGraph::fanin_reduction(campaign.config.leaves, campaign.config.fan_in);
  for (const auto& o : campaign.outcomes) {
    std::vector<MigrationRecord> recs = o.migrations;
    std::sort(recs.begin(), recs.end(), [](const MigrationRecord& a, const MigrationRecord& b) {
      return a.start_time < b.start_time;
    });
    std::vector<int> unresolved;
    for (const auto& e : o.schedule) {
      const bool has_record =
          std::any_of(recs.begin(), recs.end(),
                      [&](const MigrationRecord& r) { return r.task_id == e.target_task; });
      if (!has_record) unresolved.push_back(e.target_task);
    }
    for (const auto& r : recs) {
      out << o.trial_id << ',' << o.seed << ',' << r.task_id << ',' << r.level << ','
          << fmt_ms(r.start_time) << ',' << fmt_ms(r.end_time) << ',' << r.rebind_count << ','
          << (o.survived ? 1 : 0) << '\n';
    }
    for (int task : unresolved) {
      const int level = graph.contains(task) ? graph.node(task).level : 0;
      out << o.trial_id << ',' << o.seed << ',' << task << ',' << level << ",,,,"
          << (o.survived ? 1 : 0) << '\n';
    }
  }
  return out.str();
}

SampleMatrix parse_samples_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) fail(Errc::IncompleteData, "CSV is empty");
  const auto header = split_csv_line(line);

  const bool campaign_dialect =
      header.size() == 8 && header[0] == "trial_id" && header[4] == "t_start_ms";
  const bool samples_dialect =
      header.size() == 3 && header[0] == "node_id" && header[1] == "level" && header[2] == "sample";
  if (!campaign_dialect && !samples_dialect) {
    fail(Errc::ParseError,
         "unrecognized CSV header; expected the campaign summary or node_id,level,sample");
  }

  SampleMatrix m;
  auto add = [&](int node, int level, double v) {
    if (!m.samples.count(node)) {
      m.node_ids.push_back(node);
      m.node_level[node] = level;
    }
    m.samples[node].push_back(v);
  };

  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line);
    ++rows;
    if (campaign_dialect) {
      if (f.size() != 8) fail(Errc::ParseError, "campaign CSV row with wrong field count");
      if (f[7] != "1" || f[4].empty() || f[5].empty()) {
        ++m.excluded_failed;
        continue;
      }
      const int node = parse_int(f[2], "node_id");
      const int level = parse_int(f[3], "level");
      const double dur = parse_double(f[5], "t_end_ms") - parse_double(f[4], "t_start_ms");
      add(node, level, dur);
    } else {
      if (f.size() != 3) fail(Errc::ParseError, "samples CSV row with wrong field count");
      add(parse_int(f[0], "node_id"), parse_int(f[1], "level"), parse_double(f[2], "sample"));
    }
  }
  if (rows == 0 || m.empty()) fail(Errc::IncompleteData, "CSV contains no usable samples");

  std::sort(m.node_ids.begin(), m.node_ids.end(), [&](int a, int b) {
    const int la = m.node_level.at(a), lb = m.node_level.at(b);
    if (la != lb) return la < lb;
    return a < b;
  });
  return m;
}

SampleMatrix read_samples_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::IoError, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_samples_csv(ss.str());
}

std::string render_table_text(const MetricsTable& t) {
  std::ostringstream out;
  out << "Mean reinstatement time per node\n";
  out << "  node  level  mean\n";
  for (int id : t.node_ids) {
    out << "  N" << id << (id < 10 ? "    " : "   ") << t.node_level.at(id) << "      "
        << fmt("%.3f", t.per_node.at(id)) << '\n';
  }
  out << "Mean reinstatement time per level\n";
  out << "  level  mean\n";
  for (int level : t.levels) {
    out << "  " << level << "      " << fmt("%.3f", t.per_level.at(level)) << '\n';
  }
  out << "Overall mean reinstatement time\n";
  out << "  by-node   " << fmt("%.3f", t.overall.by_node) << '\n';
  out << "  by-level  " << fmt("%.3f", t.overall.by_level) << '\n';
  out << "samples per node: " << t.trials << "  excluded failed rows: " << t.excluded_failed
      << '\n';
  return out.str();
}

std::string render_table_csv(const MetricsTable& t) {
  std::ostringstream out;
  out << "scope,key,value\n";
  for (int id : t.node_ids) out << "node," << id << ',' << fmt_val(t.per_node.at(id)) << '\n';
  for (int level : t.levels) out << "level," << level << ',' << fmt_val(t.per_level.at(level)) << '\n';
  out << "overall,by_node," << fmt_val(t.overall.by_node) << '\n';
  out << "overall,by_level," << fmt_val(t.overall.by_level) << '\n';
  return out.str();
}

std::string level_times_csv(const SampleMatrix& m, const MetricsTable& t, int level) {
  std::vector<int> ids;
  for (int id : t.node_ids) {
    if (t.node_level.at(id) == level) ids.push_back(id);
  }
  if (ids.empty()) fail(Errc::MissingNodeMean, "no nodes at level " + std::to_string(level));

  std::ostringstream out;
  out << "trial";
  for (int id : ids) out << ",t_n" << id;
  out << ",level_mean\n";
  const int trials = m.trials();
  const std::string level_mean = fmt_val(t.per_level.at(level));
  for (int trial = 0; trial < trials; ++trial) {
    out << trial;
    for (int id : ids) out << ',' << fmt_val(m.samples.at(id)[static_cast<size_t>(trial)]);
    out << ',' << level_mean << '\n';
  }
  return out.str();
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "fan_in,total_dependencies,mean_reinstatement_ms,samples\n";
  for (const auto& r : rows) {
    out << r.fan_in << ',' << r.total_dependencies << ',' << fmt_val(r.mean_reinstatement_ms)
        << ',' << r.samples << '\n';
  }
  return out.str();
}

void write_report_files(const SampleMatrix& m, const MetricsTable& t, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  write_file(fs::path(out_dir) / "table.txt", render_table_text(t));
  write_file(fs::path(out_dir) / "table.csv", render_table_csv(t));
  for (int level : t.levels) {
    write_file(fs::path(out_dir) / ("level" + std::to_string(level) + "_times.csv"),
               level_times_csv(m, t, level));
  }
}

CampaignResult run_simulation(const ExperimentConfig& cfg, const std::string& out_dir) {
  namespace fs = std::filesystem;
  TrialObserver observer;
  if (!out_dir.empty()) {
    fs::create_directories(fs::path(out_dir) / "traces");
    const TraceLevel level = cfg.trace_level;
    observer = [out_dir, level](const TrialOutcome& outcome, const TrialTrace& trace) {
      if (level == TraceLevel::Off) return;
      char name[32];
      std::snprintf(name, sizeof(name), "trial_%04d.jsonl", outcome.trial_id);
      const fs::path path = fs::path(out_dir) / "traces" / name;
      std::ofstream out(path, std::ios::binary);
      if (!out) fail(Errc::IoError, "cannot write " + path.string());
      write_trace_jsonl(trace, out, level);
    };
  }
  CampaignResult campaign = run_campaign(cfg, observer);
  if (!out_dir.empty()) {
    write_file(fs::path(out_dir) / "campaign.csv", campaign_csv(campaign));
  }
  return campaign;
}

}  // namespace swarmft
