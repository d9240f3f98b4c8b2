// SPDX-License-Identifier: Apache-2.0
#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace swarmft {

const char* to_string(ScheduleMode m) {
  switch (m) {
    case ScheduleMode::Auto: return "auto";
    case ScheduleMode::None: return "none";
    case ScheduleMode::File: return "file";
  }
  return "?";
}

const char* to_string(TraceLevel l) {
  switch (l) {
    case TraceLevel::Off: return "off";
    case TraceLevel::Protocol: return "protocol";
    case TraceLevel::Full: return "full";
  }
  return "?";
}

namespace {

ScheduleMode schedule_mode_from(const std::string& s) {
  if (s == "auto") return ScheduleMode::Auto;
  if (s == "none") return ScheduleMode::None;
  if (s == "file") return ScheduleMode::File;
  fail(Errc::ConfigInvalid, "schedule_mode must be auto|none|file, got '" + s + "'");
}

TraceLevel trace_level_from(const std::string& s) {
  if (s == "off") return TraceLevel::Off;
  if (s == "protocol") return TraceLevel::Protocol;
  if (s == "full") return TraceLevel::Full;
  fail(Errc::ConfigInvalid, "trace_level must be off|protocol|full, got '" + s + "'");
}

void parse_grid_text(const std::string& text, ExperimentConfig& cfg) {
  if (text == "auto") {
    cfg.grid_auto = true;
    return;
  }
  const auto x = text.find_first_of("xX");
  if (x == std::string::npos) fail(Errc::ConfigInvalid, "grid must look like RxC or 'auto'");
  try {
    cfg.grid_rows = std::stoi(text.substr(0, x));
    cfg.grid_cols = std::stoi(text.substr(x + 1));
    cfg.grid_auto = false;
  } catch (const std::exception&) {
    fail(Errc::ConfigInvalid, "grid must look like RxC or 'auto', got '" + text + "'");
  }
}

template <typename T>
void read_field(const nlohmann::json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) {
    try {
      out = it->get<T>();
    } catch (const nlohmann::json::exception& e) {
      fail(Errc::ConfigInvalid, std::string("bad value for '") + key + "': " + e.what());
    }
  }
}

std::vector<FaultEntry> parse_entries(const nlohmann::json& arr) {
  std::vector<FaultEntry> out;
  if (!arr.is_array()) fail(Errc::ParseError, "schedule 'entries' must be an array");
  for (const auto& e : arr) {
    FaultEntry fe;
    if (!e.contains("target")) fail(Errc::ParseError, "schedule entry missing 'target'");
    fe.target_task = e.at("target").get<int>();
    fe.ramp_start_ms = e.value("ramp_start_ms", -1.0);
    fe.ramp_rate = e.value("ramp_rate", 0.5);
    out.push_back(fe);
  }
  return out;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) fail(Errc::ParseError, "config must be a JSON object");
  ExperimentConfig cfg;
  if (auto it = j.find("grid"); it != j.end()) {
    if (!it->is_string()) fail(Errc::ConfigInvalid, "'grid' must be a string like \"4x5\"");
    parse_grid_text(it->get<std::string>(), cfg);
  }
  read_field(j, "leaves", cfg.leaves);
  read_field(j, "fan_in", cfg.fan_in);
  read_field(j, "rounds", cfg.rounds);
  read_field(j, "trials", cfg.trials);
  read_field(j, "seed", cfg.base_seed);
  read_field(j, "baseline_temp", cfg.baseline_temp);
  read_field(j, "noise_sigma", cfg.noise_sigma);
  read_field(j, "threshold", cfg.threshold);
  read_field(j, "ramp_rate", cfg.ramp_rate);
  read_field(j, "sensor_tick_ms", cfg.sensor_tick_ms);
  read_field(j, "grace_window_ms", cfg.grace_window_ms);
  read_field(j, "spawn_cost_ms", cfg.spawn_cost_ms);
  read_field(j, "transfer_cost_ms_per_value", cfg.transfer_cost_ms_per_value);
  read_field(j, "rebind_cost_ms_per_dep", cfg.rebind_cost_ms_per_dep);
  read_field(j, "jitter_pct", cfg.jitter_pct);
  read_field(j, "hop_latency_ms", cfg.hop_latency_ms);
  read_field(j, "probe_timeout_ms", cfg.probe_timeout_ms);
  read_field(j, "rebind_timeout_ms", cfg.rebind_timeout_ms);
  read_field(j, "history_window", cfg.history_window);
  read_field(j, "fault_round", cfg.fault_round);
  read_field(j, "allow_concurrent_faults", cfg.allow_concurrent_faults);
  if (auto it = j.find("schedule"); it != j.end()) {
    if (it->is_string()) {
      const std::string s = it->get<std::string>();
      if (s == "auto" || s == "none") {
        cfg.schedule_mode = schedule_mode_from(s);
      } else {
        cfg.schedule_mode = ScheduleMode::File;
        cfg.schedule_path = s;
      }
    } else if (it->is_object()) {
      // inline schedule object
      cfg.schedule_mode = ScheduleMode::File;
      cfg.file_schedule = parse_entries(it->at("entries"));
      cfg.allow_concurrent_faults = it->value("allow_concurrent", cfg.allow_concurrent_faults);
    } else {
      fail(Errc::ConfigInvalid, "'schedule' must be auto|none|<path> or an inline object");
    }
  }
  if (auto it = j.find("trace_level"); it != j.end()) {
    cfg.trace_level = trace_level_from(it->get<std::string>());
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::ParseError, std::string("config JSON: ") + e.what());
  }
  return from_json(j);
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["grid"] = grid_auto ? std::string("auto")
                        : std::to_string(grid_rows) + "x" + std::to_string(grid_cols);
  j["leaves"] = leaves;
  j["fan_in"] = fan_in;
  j["rounds"] = rounds;
  j["trials"] = trials;
  j["seed"] = base_seed;
  j["baseline_temp"] = baseline_temp;
  j["noise_sigma"] = noise_sigma;
  j["threshold"] = threshold;
  j["ramp_rate"] = ramp_rate;
  j["sensor_tick_ms"] = sensor_tick_ms;
  j["grace_window_ms"] = grace_window_ms;
  j["spawn_cost_ms"] = spawn_cost_ms;
  j["transfer_cost_ms_per_value"] = transfer_cost_ms_per_value;
  j["rebind_cost_ms_per_dep"] = rebind_cost_ms_per_dep;
  j["jitter_pct"] = jitter_pct;
  j["hop_latency_ms"] = hop_latency_ms;
  j["probe_timeout_ms"] = probe_timeout_ms;
  j["rebind_timeout_ms"] = rebind_timeout_ms;
  j["history_window"] = history_window;
  j["fault_round"] = fault_round;
  j["allow_concurrent_faults"] = allow_concurrent_faults;
  j["trace_level"] = to_string(trace_level);
  if (schedule_mode == ScheduleMode::File) {
    if (!schedule_path.empty()) {
      j["schedule"] = schedule_path;
    } else {
      nlohmann::json entries = nlohmann::json::array();
      for (const auto& e : file_schedule) {
        entries.push_back({{"target", e.target_task},
                           {"ramp_start_ms", e.ramp_start_ms},
                           {"ramp_rate", e.ramp_rate}});
      }
      j["schedule"] = {{"entries", std::move(entries)}, {"allow_concurrent", allow_concurrent_faults}};
    }
  } else {
    j["schedule"] = to_string(schedule_mode);
  }
  return j;
}

int ExperimentConfig::task_node_count() const {
  if (fan_in < 2) fail(Errc::InvalidFanIn, "fan-in must be >= 2");
  int n = leaves;
  int total = n;
  while (n > 1) {
    if (n % fan_in != 0) {
      fail(Errc::InvalidLeafCount, "leaves " + std::to_string(leaves) +
                                       " is not a positive power of fan-in " +
                                       std::to_string(fan_in));
    }
    n /= fan_in;
    total += n;
  }
  if (leaves < 2) fail(Errc::InvalidLeafCount, "leaves must be >= 2");
  return total;
}

void ExperimentConfig::resolve_grid() {
  if (!grid_auto) return;
  const int n = task_node_count();
  int side = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
  if (side < 2) side = 2;
  grid_rows = side;
  grid_cols = side;
  grid_auto = false;
}

void ExperimentConfig::load_schedule_file() {
  if (schedule_mode != ScheduleMode::File || schedule_path.empty()) return;
  std::ifstream in(schedule_path);
  if (!in) fail(Errc::IoError, "cannot open schedule file " + schedule_path);
  std::stringstream ss;
  ss << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ss.str());
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::ParseError, "schedule file " + schedule_path + ": " + e.what());
  }
  if (!j.contains("entries")) fail(Errc::ParseError, "schedule file missing 'entries'");
  file_schedule = parse_entries(j.at("entries"));
  allow_concurrent_faults = j.value("allow_concurrent", allow_concurrent_faults);
}

void ExperimentConfig::validate() const {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) fail(Errc::ConfigInvalid, msg);
  };
  require(grid_rows >= 1 && grid_cols >= 1, "grid dimensions must be >= 1");
  require(fan_in >= 2, "fan-in must be >= 2");
  require(leaves >= 2, "leaves must be >= 2");
  const int tasks = task_node_count();  // validates leaves vs fan-in
  require(!grid_auto, "grid not resolved; call resolve_grid() first");
  require(grid_rows * grid_cols >= tasks,
          "grid " + std::to_string(grid_rows) + "x" + std::to_string(grid_cols) + " holds " +
              std::to_string(grid_rows * grid_cols) + " nodes but the task graph needs " +
              std::to_string(tasks));
  require(rounds >= 1, "rounds must be >= 1");
  require(trials >= 1, "trials must be >= 1");
  require(noise_sigma >= 0, "noise sigma must be >= 0");
  require(threshold > baseline_temp, "threshold must exceed the baseline temperature");
  require(ramp_rate > 0, "ramp rate must be > 0");
  require(sensor_tick_ms > 0, "sensor tick must be > 0");
  require(grace_window_ms > 0, "grace window must be > 0");
  require(spawn_cost_ms >= 0 && transfer_cost_ms_per_value >= 0 && rebind_cost_ms_per_dep >= 0,
          "cost parameters must be >= 0");
  require(jitter_pct >= 0 && jitter_pct <= 0.5, "jitter must be in [0, 0.5]");
  require(hop_latency_ms > 0, "hop latency must be > 0");
  require(probe_timeout_ms > 0 && rebind_timeout_ms > 0, "timeouts must be > 0");
  require(history_window >= 1, "history window must be >= 1");
  require(fault_round < rounds, "fault round must be below the round count");

  if (schedule_mode == ScheduleMode::File) {
    require(!file_schedule.empty() || !schedule_path.empty(),
            "file schedule selected but no entries loaded");
    std::vector<FaultEntry> entries = file_schedule;
    for (const auto& e : entries) {
      require(e.target_task >= 1 && e.target_task <= tasks,
              "schedule target " + std::to_string(e.target_task) + " is not a task node id");
      require(e.ramp_rate > 0, "schedule entry ramp rate must be > 0");
      require(e.ramp_start_ms >= 0, "file schedule entries need an explicit ramp_start_ms");
    }
    for (size_t a = 0; a < entries.size(); ++a) {
      for (size_t b = a + 1; b < entries.size(); ++b) {
        require(entries[a].target_task != entries[b].target_task,
                "schedule targets task " + std::to_string(entries[a].target_task) + " twice");
      }
    }
    if (!allow_concurrent_faults && entries.size() > 1) {
      // one fault at a time: the next ramp may only start once the previous
      // node has been predicted and hard-failed
      std::sort(entries.begin(), entries.end(),
                [](const FaultEntry& x, const FaultEntry& y) { return x.ramp_start_ms < y.ramp_start_ms; });
      for (size_t i = 0; i + 1 < entries.size(); ++i) {
        const double resolve =
            entries[i].ramp_start_ms + (threshold - baseline_temp) / entries[i].ramp_rate +
            grace_window_ms;
        require(entries[i + 1].ramp_start_ms >= resolve,
                "schedule entries overlap in time; set allow_concurrent to permit this");
      }
    }
  }
}

}  // namespace swarmft
