// SPDX-License-Identifier: Apache-2.0
//
// swarmft command-line front end: configure, run and report on
// fault-tolerance experiments through the shared-library C API.
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "swarmft.h"

namespace {

struct ConfigFlags {
  std::optional<std::string> config_file;
  std::optional<std::string> grid;
  std::optional<int> leaves, fan_in, rounds, trials, history_window, fault_round;
  std::optional<uint64_t> seed;
  std::optional<double> threshold, grace_window, spawn_cost, transfer_cost, rebind_cost;
  std::optional<double> jitter_pct, hop_latency, probe_timeout, rebind_timeout;
  std::optional<double> baseline, noise_sigma, ramp_rate, sensor_tick;
  std::optional<std::string> schedule;
  std::optional<std::string> trace_level;
  bool allow_concurrent = false;
};

void add_config_flags(CLI::App* cmd, ConfigFlags& f, bool tree_shape = true) {
  cmd->add_option("--config", f.config_file, "JSON config file; flags override its values");
  if (tree_shape) {
    cmd->add_option("--grid", f.grid, "grid dimensions RxC, or 'auto'");
    cmd->add_option("--leaves", f.leaves, "leaf count of the reduction tree");
    cmd->add_option("--fan-in", f.fan_in, "input dependencies per internal node");
  }
  cmd->add_option("--rounds", f.rounds, "reduction rounds per trial");
  cmd->add_option("--trials", f.trials, "trials per fault target");
  cmd->add_option("--seed", f.seed, "base seed; trial i uses seed+i");
  cmd->add_option("--threshold", f.threshold, "failure-prediction temperature threshold");
  cmd->add_option("--grace-window", f.grace_window, "ms between prediction and hard failure");
  cmd->add_option("--spawn-cost", f.spawn_cost, "ms to spawn a standby process");
  cmd->add_option("--transfer-cost", f.transfer_cost, "ms per transferred payload value");
  cmd->add_option("--rebind-cost", f.rebind_cost, "ms per dependency rebind");
  cmd->add_option("--jitter-pct", f.jitter_pct, "multiplicative cost jitter, e.g. 0.05");
  cmd->add_option("--hop-latency", f.hop_latency, "ms per grid hop");
  cmd->add_option("--probe-timeout", f.probe_timeout, "ms to wait for probe answers");
  cmd->add_option("--rebind-timeout", f.rebind_timeout, "ms to wait for a rebind ack");
  cmd->add_option("--history-window", f.history_window, "per-node result values retained");
  cmd->add_option("--fault-round", f.fault_round, "round at which auto fault ramps start");
  cmd->add_option("--baseline", f.baseline, "baseline node temperature");
  cmd->add_option("--noise-sigma", f.noise_sigma, "sensor noise standard deviation");
  cmd->add_option("--ramp-rate", f.ramp_rate, "fault ramp, degrees per ms");
  cmd->add_option("--sensor-tick", f.sensor_tick, "ms between sensor readings");
  cmd->add_option("--schedule", f.schedule, "fault schedule: auto, none, or a JSON file");
  cmd->add_option("--trace-level", f.trace_level, "trace files: off, protocol, full");
  cmd->add_flag("--allow-concurrent-faults", f.allow_concurrent,
                "permit overlapping fault ramps (exploratory)");
}

int fail_config(const std::string& msg) {
  std::cerr << "error: " << msg << "\n";
  return 1;
}

/// Builds the effective config JSON: file (if given) overlaid with flags.
int build_config_json(const ConfigFlags& f, std::string& out_json) {
  nlohmann::json j = nlohmann::json::object();
  if (f.config_file) {
    std::ifstream in(*f.config_file);
    if (!in) return fail_config("cannot open config file " + *f.config_file);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      j = nlohmann::json::parse(ss.str());
    } catch (const nlohmann::json::exception& e) {
      return fail_config(std::string("config file: ") + e.what());
    }
  }
  auto set = [&j](const char* key, const auto& opt) {
    if (opt) j[key] = *opt;
  };
  set("grid", f.grid);
  set("leaves", f.leaves);
  set("fan_in", f.fan_in);
  set("rounds", f.rounds);
  set("trials", f.trials);
  set("seed", f.seed);
  set("threshold", f.threshold);
  set("grace_window_ms", f.grace_window);
  set("spawn_cost_ms", f.spawn_cost);
  set("transfer_cost_ms_per_value", f.transfer_cost);
  set("rebind_cost_ms_per_dep", f.rebind_cost);
  set("jitter_pct", f.jitter_pct);
  set("hop_latency_ms", f.hop_latency);
  set("probe_timeout_ms", f.probe_timeout);
  set("rebind_timeout_ms", f.rebind_timeout);
  set("history_window", f.history_window);
  set("fault_round", f.fault_round);
  set("baseline_temp", f.baseline);
  set("noise_sigma", f.noise_sigma);
  set("ramp_rate", f.ramp_rate);
  set("sensor_tick_ms", f.sensor_tick);
  set("schedule", f.schedule);
  set("trace_level", f.trace_level);
  if (f.allow_concurrent) j["allow_concurrent_faults"] = true;
  out_json = j.dump();
  return 0;
}

struct ConfigHandle {
  sft_config* cfg = nullptr;
  ~ConfigHandle() { sft_config_destroy(cfg); }
};

int make_config(const ConfigFlags& f, ConfigHandle& handle) {
  std::string json;
  if (int rc = build_config_json(f, json); rc != 0) return rc;
  if (sft_config_from_json(json.c_str(), &handle.cfg) != SFT_OK) {
    return fail_config(sft_last_error());
  }
  if (sft_config_validate(handle.cfg) != SFT_OK) {
    return fail_config(sft_last_error());
  }
  return 0;
}

std::string take_string(char* s) {
  std::string out = s ? s : "";
  sft_string_free(s);
  return out;
}

int cmd_simulate(const ConfigFlags& flags, const std::string& out_dir) {
  ConfigHandle cfg;
  if (int rc = make_config(flags, cfg); rc != 0) return rc;

  sft_campaign* campaign = nullptr;
  if (sft_campaign_run(cfg.cfg, out_dir.empty() ? nullptr : out_dir.c_str(), &campaign) !=
      SFT_OK) {
    return fail_config(sft_last_error());
  }
  const int trials = sft_campaign_trial_count(campaign);
  const int failed = sft_campaign_failed_count(campaign);
  const int migrations = sft_campaign_migration_count(campaign);
  std::cout << "trials:      " << trials << "\n";
  std::cout << "survived:    " << (trials - failed) << "\n";
  std::cout << "failed:      " << failed << "\n";
  std::cout << "migrations:  " << migrations << "\n";

  if (migrations > 0 && failed == 0) {
    sft_samples* samples = nullptr;
    sft_metrics* metrics = nullptr;
    if (sft_samples_from_campaign(campaign, &samples) == SFT_OK &&
        sft_metrics_compute(samples, &metrics) == SFT_OK) {
      double by_node = 0, by_level = 0;
      if (sft_metrics_overall(metrics, &by_node, &by_level) == SFT_OK) {
        std::printf("mean reinstatement: %.3f ms\n", by_node);
      }
    }
    sft_metrics_destroy(metrics);
    sft_samples_destroy(samples);
  }
  if (!out_dir.empty()) std::cout << "outputs:     " << out_dir << "\n";
  sft_campaign_destroy(campaign);
  return failed > 0 ? 2 : 0;
}

int cmd_report(const std::string& csv_path, const std::string& out_dir) {
  sft_samples* samples = nullptr;
  if (sft_samples_read_csv(csv_path.c_str(), &samples) != SFT_OK) {
    return fail_config(sft_last_error());
  }
  sft_metrics* metrics = nullptr;
  if (sft_metrics_compute(samples, &metrics) != SFT_OK) {
    const std::string err = sft_last_error();
    sft_samples_destroy(samples);
    return fail_config(err);
  }
  char* text = nullptr;
  if (sft_metrics_table_text(metrics, &text) == SFT_OK) {
    std::cout << take_string(text);
  }
  int rc = 0;
  if (!out_dir.empty()) {
    if (sft_metrics_write_report(metrics, samples, out_dir.c_str()) != SFT_OK) {
      rc = fail_config(sft_last_error());
    } else {
      std::cout << "report files written to " << out_dir << "\n";
    }
  }
  sft_metrics_destroy(metrics);
  sft_samples_destroy(samples);
  return rc;
}

int parse_fan_in_range(const std::string& text, int& lo, int& hi) {
  const auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      lo = hi = std::stoi(text);
    } else {
      lo = std::stoi(text.substr(0, dots));
      hi = std::stoi(text.substr(dots + 2));
    }
  } catch (const std::exception&) {
    return fail_config("fan-in range must look like 2..8 or a single integer");
  }
  if (lo < 2 || hi < lo) return fail_config("fan-in range must satisfy 2 <= min <= max");
  return 0;
}

int cmd_sweep(ConfigFlags flags, const std::string& range, const std::string& out_dir) {
  if (!flags.trials) flags.trials = 10;  // sweeps run many campaigns; keep them light
  int lo = 0, hi = 0;
  if (int rc = parse_fan_in_range(range, lo, hi); rc != 0) return rc;
  flags.fan_in.reset();  // the sweep sets fan-in per campaign
  flags.leaves.reset();
  flags.grid.reset();

  ConfigHandle cfg;
  std::string json;
  if (int rc = build_config_json(flags, json); rc != 0) return rc;
  if (sft_config_from_json(json.c_str(), &cfg.cfg) != SFT_OK) {
    return fail_config(sft_last_error());
  }

  sft_sweep* sweep = nullptr;
  if (sft_sweep_run(cfg.cfg, lo, hi, &sweep) != SFT_OK) {
    return fail_config(sft_last_error());
  }
  char* csv = nullptr;
  std::string csv_text;
  if (sft_sweep_csv(sweep, &csv) == SFT_OK) csv_text = take_string(csv);
  std::cout << csv_text;
  if (!out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    std::ofstream out(std::filesystem::path(out_dir) / "dependency_sweep.csv", std::ios::binary);
    if (!out) {
      sft_sweep_destroy(sweep);
      return fail_config("cannot write dependency_sweep.csv under " + out_dir);
    }
    out << csv_text;
  }
  sft_sweep_destroy(sweep);
  return 0;
}

int cmd_validate(const ConfigFlags& flags) {
  ConfigHandle cfg;
  if (int rc = make_config(flags, cfg); rc != 0) return rc;
  char* json = nullptr;
  if (sft_config_to_json(cfg.cfg, &json) == SFT_OK) {
    std::cout << take_string(json) << "\n";
  }
  std::cout << "config ok\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deterministic simulator of agent-based proactive fault tolerance\n"
               "for parallel reduction workloads"};
  app.require_subcommand(1);

  ConfigFlags sim_flags;
  std::string sim_out = "out";
  auto* simulate = app.add_subcommand("simulate", "run a fault-injection campaign");
  add_config_flags(simulate, sim_flags);
  simulate->add_option("--out", sim_out, "output directory (campaign.csv, traces/)");

  std::string report_csv;
  std::string report_out;
  auto* report = app.add_subcommand("report", "aggregate a campaign or samples CSV");
  report->add_option("csv", report_csv, "campaign.csv or node_id,level,sample CSV")->required();
  report->add_option("--out", report_out, "directory for table and per-level CSV files");

  ConfigFlags sweep_flags;
  std::string sweep_range = "2..8";
  std::string sweep_out;
  auto* sweep = app.add_subcommand("sweep", "mean reinstatement vs dependency count");
  add_config_flags(sweep, sweep_flags, /*tree_shape=*/false);
  sweep->add_option("--fan-in", sweep_range, "fan-in range, e.g. 2..8");
  sweep->add_option("--out", sweep_out, "directory for dependency_sweep.csv");

  ConfigFlags validate_flags;
  auto* validate = app.add_subcommand("validate-config", "check a configuration and echo it");
  add_config_flags(validate, validate_flags);

  CLI11_PARSE(app, argc, argv);

  if (simulate->parsed()) return cmd_simulate(sim_flags, sim_out);
  if (report->parsed()) return cmd_report(report_csv, report_out);
  if (sweep->parsed()) return cmd_sweep(sweep_flags, sweep_range, sweep_out);
  if (validate->parsed()) return cmd_validate(validate_flags);
  return 1;
}
