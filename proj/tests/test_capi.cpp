// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <cstring>
#include <string>

#include "doctest.h"
#include "swarmft.h"

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  sft_string_free(s);
  return out;
}

struct Cfg {
  sft_config* h = nullptr;
  explicit Cfg(const char* json) { REQUIRE(sft_config_from_json(json, &h) == SFT_OK); }
  Cfg() { REQUIRE(sft_config_create_default(&h) == SFT_OK); }
  ~Cfg() { sft_config_destroy(h); }
};

}  // namespace

TEST_SUITE("capi") {

TEST_CASE("default config validates and echoes as JSON") {
  Cfg cfg;
  CHECK(sft_config_validate(cfg.h) == SFT_OK);
  char* json = nullptr;
  REQUIRE(sft_config_to_json(cfg.h, &json) == SFT_OK);
  const std::string text = take(json);
  CHECK(text.find("\"grid\": \"4x5\"") != std::string::npos);
  CHECK(text.find("\"leaves\": 8") != std::string::npos);
}

TEST_CASE("malformed JSON reports a parse error") {
  sft_config* h = nullptr;
  CHECK(sft_config_from_json("{not json", &h) == SFT_ERROR_PARSE);
  CHECK(std::strlen(sft_last_error()) > 0);
}

TEST_CASE("invalid configs report a config error") {
  Cfg cfg("{\"grid\": \"2x2\"}");  // 15 tasks cannot fit
  CHECK(sft_config_validate(cfg.h) == SFT_ERROR_CONFIG);
  const std::string err = sft_last_error();
  CHECK(err.find("task graph") != std::string::npos);
}

TEST_CASE("null arguments are rejected") {
  CHECK(sft_config_from_json(nullptr, nullptr) == SFT_ERROR_ARGUMENT);
  CHECK(sft_config_validate(nullptr) == SFT_ERROR_ARGUMENT);
  CHECK(sft_campaign_run(nullptr, nullptr, nullptr) == SFT_ERROR_ARGUMENT);
  CHECK(sft_samples_parse_csv(nullptr, nullptr) == SFT_ERROR_ARGUMENT);
}

TEST_CASE("a small campaign runs end to end through the C surface") {
  Cfg cfg("{\"trials\": 2, \"rounds\": 50}");
  sft_campaign* campaign = nullptr;
  REQUIRE(sft_campaign_run(cfg.h, nullptr, &campaign) == SFT_OK);
  CHECK(sft_campaign_trial_count(campaign) == 14);
  CHECK(sft_campaign_failed_count(campaign) == 0);
  CHECK(sft_campaign_migration_count(campaign) == 14);

  char* csv = nullptr;
  REQUIRE(sft_campaign_csv(campaign, &csv) == SFT_OK);
  const std::string text = take(csv);
  CHECK(text.rfind("trial_id,seed,", 0) == 0);

  sft_samples* samples = nullptr;
  REQUIRE(sft_samples_from_campaign(campaign, &samples) == SFT_OK);
  CHECK(sft_samples_node_count(samples) == 7);
  CHECK(sft_samples_excluded_count(samples) == 0);

  sft_metrics* metrics = nullptr;
  REQUIRE(sft_metrics_compute(samples, &metrics) == SFT_OK);
  double mean = 0.0;
  REQUIRE(sft_metrics_node_mean(metrics, 13, &mean) == SFT_OK);
  CHECK(mean > 0.0);
  CHECK(sft_metrics_node_mean(metrics, 99, &mean) == SFT_ERROR_INCOMPLETE);

  double by_node = 0.0, by_level = 0.0;
  REQUIRE(sft_metrics_overall(metrics, &by_node, &by_level) == SFT_OK);
  CHECK(by_node > 0.0);

  sft_metrics_destroy(metrics);
  sft_samples_destroy(samples);
  sft_campaign_destroy(campaign);
}

TEST_CASE("samples parse and metrics getters match the reference table") {
  const char* csv =
      "node_id,level,sample\n"
      "9,2,0.339\n10,2,0.349\n11,2,0.352\n12,2,0.345\n"
      "13,3,0.347\n14,3,0.340\n15,4,0.341\n";
  sft_samples* samples = nullptr;
  REQUIRE(sft_samples_parse_csv(csv, &samples) == SFT_OK);
  sft_metrics* metrics = nullptr;
  REQUIRE(sft_metrics_compute(samples, &metrics) == SFT_OK);

  double v = 0.0;
  REQUIRE(sft_metrics_level_mean(metrics, 2, &v) == SFT_OK);
  CHECK(std::abs(v - 0.346) <= 0.001);
  REQUIRE(sft_metrics_level_mean(metrics, 4, &v) == SFT_OK);
  CHECK(v == doctest::Approx(0.341));
  CHECK(sft_metrics_level_mean(metrics, 7, &v) == SFT_ERROR_INCOMPLETE);

  char* text = nullptr;
  REQUIRE(sft_metrics_table_text(metrics, &text) == SFT_OK);
  CHECK(take(text).find("Overall mean") != std::string::npos);

  sft_metrics_destroy(metrics);
  sft_samples_destroy(samples);
}

TEST_CASE("sweep rows through the C surface") {
  Cfg cfg("{\"trials\": 2, \"rounds\": 40}");
  sft_sweep* sweep = nullptr;
  REQUIRE(sft_sweep_run(cfg.h, 2, 3, &sweep) == SFT_OK);
  REQUIRE(sft_sweep_row_count(sweep) == 2);
  int deps = 0, samples = 0;
  double mean = 0.0;
  REQUIRE(sft_sweep_row(sweep, 0, &deps, &mean, &samples) == SFT_OK);
  CHECK(deps == 3);
  CHECK(samples == 6);
  CHECK(mean > 0.0);
  CHECK(sft_sweep_row(sweep, 5, &deps, &mean, &samples) == SFT_ERROR_ARGUMENT);
  char* csv = nullptr;
  REQUIRE(sft_sweep_csv(sweep, &csv) == SFT_OK);
  CHECK(take(csv).rfind("fan_in,total_dependencies,", 0) == 0);
  sft_sweep_destroy(sweep);
}

}  // TEST_SUITE
