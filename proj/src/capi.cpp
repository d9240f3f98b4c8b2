// SPDX-License-Identifier: Apache-2.0
#include "swarmft.h"

#include <cstring>
#include <string>

#include "config.hpp"
#include "engine.hpp"
#include "error.hpp"
#include "metrics.hpp"
#include "report.hpp"

#define SFT_EXPORT __attribute__((visibility("default")))

namespace {

thread_local std::string g_last_error = "no error";

sft_status status_of(swarmft::Errc c) {
  using swarmft::Errc;
  switch (c) {
    case Errc::ConfigInvalid:
    case Errc::DimensionMismatch:
    case Errc::InvalidLeafCount:
    case Errc::InvalidFanIn:
      return SFT_ERROR_CONFIG;
    case Errc::ParseError:
      return SFT_ERROR_PARSE;
    case Errc::IoError:
      return SFT_ERROR_IO;
    case Errc::IncompleteData:
    case Errc::IncompleteRow:
    case Errc::MissingNodeMean:
    case Errc::MissingEntries:
    case Errc::UnknownNode:
      return SFT_ERROR_INCOMPLETE;
    default:
      return SFT_ERROR_INTERNAL;
  }
}

template <typename Fn>
sft_status guarded(Fn&& fn) {
  try {
    fn();
    return SFT_OK;
  } catch (const swarmft::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SFT_ERROR_INTERNAL;
  }
}

sft_status arg_error(const char* msg) {
  g_last_error = msg;
  return SFT_ERROR_ARGUMENT;
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

struct sft_config {
  swarmft::ExperimentConfig cfg;
};

struct sft_campaign {
  swarmft::CampaignResult result;
};

struct sft_samples {
  swarmft::SampleMatrix matrix;
};

struct sft_metrics {
  swarmft::MetricsTable table;
};

struct sft_sweep {
  std::vector<swarmft::SweepRow> rows;
};

extern "C" {

SFT_EXPORT const char* sft_last_error(void) { return g_last_error.c_str(); }

SFT_EXPORT void sft_string_free(char* s) { delete[] s; }

SFT_EXPORT sft_status sft_config_create_default(sft_config** out) {
  if (!out) return arg_error("out is NULL");
  return guarded([&] { *out = new sft_config{}; });
}

SFT_EXPORT sft_status sft_config_from_json(const char* json_text, sft_config** out) {
  if (!json_text || !out) return arg_error("json_text and out must be non-NULL");
  return guarded([&] {
    auto cfg = swarmft::ExperimentConfig::from_json_text(json_text);
    *out = new sft_config{std::move(cfg)};
  });
}

SFT_EXPORT sft_status sft_config_to_json(const sft_config* cfg, char** out_json) {
  if (!cfg || !out_json) return arg_error("cfg and out_json must be non-NULL");
  return guarded([&] { *out_json = dup_string(cfg->cfg.to_json().dump(2)); });
}

SFT_EXPORT sft_status sft_config_validate(const sft_config* cfg) {
  if (!cfg) return arg_error("cfg is NULL");
  return guarded([&] {
    swarmft::ExperimentConfig c = cfg->cfg;
    c.load_schedule_file();
    c.resolve_grid();
    c.validate();
  });
}

SFT_EXPORT void sft_config_destroy(sft_config* cfg) { delete cfg; }

SFT_EXPORT sft_status sft_campaign_run(const sft_config* cfg, const char* out_dir,
                                        sft_campaign** out) {
  if (!cfg || !out) return arg_error("cfg and out must be non-NULL");
  return guarded([&] {
    auto result = swarmft::run_simulation(cfg->cfg, out_dir ? out_dir : "");
    *out = new sft_campaign{std::move(result)};
  });
}

SFT_EXPORT int sft_campaign_trial_count(const sft_campaign* c) {
  return c ? static_cast<int>(c->result.outcomes.size()) : 0;
}

SFT_EXPORT int sft_campaign_failed_count(const sft_campaign* c) {
  return c ? c->result.failed_count() : 0;
}

SFT_EXPORT int sft_campaign_migration_count(const sft_campaign* c) {
  return c ? c->result.migration_count() : 0;
}

SFT_EXPORT sft_status sft_campaign_csv(const sft_campaign* c, char** out_csv) {
  if (!c || !out_csv) return arg_error("campaign and out_csv must be non-NULL");
  return guarded([&] { *out_csv = dup_string(swarmft::campaign_csv(c->result)); });
}

SFT_EXPORT void sft_campaign_destroy(sft_campaign* c) { delete c; }

SFT_EXPORT sft_status sft_samples_read_csv(const char* path, sft_samples** out) {
  if (!path || !out) return arg_error("path and out must be non-NULL");
  return guarded([&] { *out = new sft_samples{swarmft::read_samples_csv(path)}; });
}

SFT_EXPORT sft_status sft_samples_parse_csv(const char* text, sft_samples** out) {
  if (!text || !out) return arg_error("text and out must be non-NULL");
  return guarded([&] { *out = new sft_samples{swarmft::parse_samples_csv(text)}; });
}

SFT_EXPORT sft_status sft_samples_from_campaign(const sft_campaign* c, sft_samples** out) {
  if (!c || !out) return arg_error("campaign and out must be non-NULL");
  return guarded(
      [&] { *out = new sft_samples{swarmft::SampleMatrix::from_campaign(c->result)}; });
}

SFT_EXPORT int sft_samples_node_count(const sft_samples* s) {
  return s ? static_cast<int>(s->matrix.node_ids.size()) : 0;
}

SFT_EXPORT int sft_samples_excluded_count(const sft_samples* s) {
  return s ? s->matrix.excluded_failed : 0;
}

SFT_EXPORT void sft_samples_destroy(sft_samples* s) { delete s; }

SFT_EXPORT sft_status sft_metrics_compute(const sft_samples* s, sft_metrics** out) {
  if (!s || !out) return arg_error("samples and out must be non-NULL");
  return guarded([&] { *out = new sft_metrics{swarmft::MetricsTable::compute(s->matrix)}; });
}

SFT_EXPORT sft_status sft_metrics_node_mean(const sft_metrics* m, int node_id, double* out) {
  if (!m || !out) return arg_error("metrics and out must be non-NULL");
  return guarded([&] {
    auto it = m->table.per_node.find(node_id);
    if (it == m->table.per_node.end()) {
      swarmft::fail(swarmft::Errc::UnknownNode, "node " + std::to_string(node_id));
    }
    *out = it->second;
  });
}

SFT_EXPORT sft_status sft_metrics_level_mean(const sft_metrics* m, int level, double* out) {
  if (!m || !out) return arg_error("metrics and out must be non-NULL");
  return guarded([&] {
    auto it = m->table.per_level.find(level);
    if (it == m->table.per_level.end()) {
      swarmft::fail(swarmft::Errc::MissingNodeMean, "level " + std::to_string(level));
    }
    *out = it->second;
  });
}

SFT_EXPORT sft_status sft_metrics_overall(const sft_metrics* m, double* by_node,
                                           double* by_level) {
  if (!m || !by_node || !by_level) return arg_error("metrics and outputs must be non-NULL");
  return guarded([&] {
    const auto overall = swarmft::overall_mean(m->table);
    *by_node = overall.by_node;
    *by_level = overall.by_level;
  });
}

SFT_EXPORT sft_status sft_metrics_table_text(const sft_metrics* m, char** out_text) {
  if (!m || !out_text) return arg_error("metrics and out_text must be non-NULL");
  return guarded([&] { *out_text = dup_string(swarmft::render_table_text(m->table)); });
}

SFT_EXPORT sft_status sft_metrics_write_report(const sft_metrics* m, const sft_samples* s,
                                                const char* out_dir) {
  if (!m || !s || !out_dir) return arg_error("metrics, samples and out_dir must be non-NULL");
  return guarded([&] { swarmft::write_report_files(s->matrix, m->table, out_dir); });
}

SFT_EXPORT void sft_metrics_destroy(sft_metrics* m) { delete m; }

SFT_EXPORT sft_status sft_sweep_run(const sft_config* cfg, int fan_in_min, int fan_in_max,
                                     sft_sweep** out) {
  if (!cfg || !out) return arg_error("cfg and out must be non-NULL");
  return guarded([&] {
    *out = new sft_sweep{swarmft::dependency_sweep(cfg->cfg, fan_in_min, fan_in_max)};
  });
}

SFT_EXPORT int sft_sweep_row_count(const sft_sweep* s) {
  return s ? static_cast<int>(s->rows.size()) : 0;
}

SFT_EXPORT sft_status sft_sweep_row(const sft_sweep* s, int index, int* total_dependencies,
                                     double* mean_reinstatement_ms, int* samples) {
  if (!s) return arg_error("sweep is NULL");
  if (index < 0 || index >= static_cast<int>(s->rows.size())) {
    return arg_error("sweep row index out of range");
  }
  const auto& r = s->rows[static_cast<size_t>(index)];
  if (total_dependencies) *total_dependencies = r.total_dependencies;
  if (mean_reinstatement_ms) *mean_reinstatement_ms = r.mean_reinstatement_ms;
  if (samples) *samples = r.samples;
  return SFT_OK;
}

SFT_EXPORT sft_status sft_sweep_csv(const sft_sweep* s, char** out_csv) {
  if (!s || !out_csv) return arg_error("sweep and out_csv must be non-NULL");
  return guarded([&] { *out_csv = dup_string(swarmft::sweep_csv(s->rows)); });
}

SFT_EXPORT void sft_sweep_destroy(sft_sweep* s) { delete s; }

}  // extern "C"
