// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <string>

#include "doctest.h"
#include "report.hpp"

using namespace swarmft;

namespace {

const char* kReferenceSamples =
    "node_id,level,sample\n"
    "9,2,0.339\n"
    "10,2,0.349\n"
    "11,2,0.352\n"
    "12,2,0.345\n"
    "13,3,0.347\n"
    "14,3,0.340\n"
    "15,4,0.341\n";

CampaignResult small_campaign() {
  ExperimentConfig cfg;
  cfg.trials = 2;
  cfg.rounds = 50;
  return run_campaign(cfg);
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("campaign CSV has one row per fault target") {
  const auto campaign = small_campaign();
  const std::string csv = campaign_csv(campaign);
  const size_t rows = std::count(csv.begin(), csv.end(), '\n');
  CHECK(rows == 1 + 14);  // header + 7 nodes x 2 trials
  CHECK(csv.rfind("trial_id,seed,node_id,level,t_start_ms,t_end_ms,rebinds,survived\n", 0) == 0);
}

TEST_CASE("the campaign CSV round-trips into a complete sample matrix") {
  const auto campaign = small_campaign();
  const auto m = parse_samples_csv(campaign_csv(campaign));
  CHECK(m.node_ids == std::vector<int>{9, 10, 11, 12, 13, 14, 15});
  CHECK(m.trials() == 2);
  CHECK(m.excluded_failed == 0);
  // durations match the in-memory records up to the CSV's 3-decimal quantization
  const auto direct = SampleMatrix::from_campaign(campaign);
  for (int id : m.node_ids) {
    REQUIRE(m.samples.at(id).size() == direct.samples.at(id).size());
    for (size_t i = 0; i < m.samples.at(id).size(); ++i) {
      CHECK(std::abs(m.samples.at(id)[i] - direct.samples.at(id)[i]) <= 0.002);
    }
  }
}

TEST_CASE("failed rows are excluded and counted") {
  const std::string csv =
      "trial_id,seed,node_id,level,t_start_ms,t_end_ms,rebinds,survived\n"
      "0,42,9,2,100.000,350.000,3,1\n"
      "1,43,9,2,,,,0\n";
  const auto m = parse_samples_csv(csv);
  CHECK(m.samples.at(9).size() == 1);
  CHECK(m.excluded_failed == 1);
}

TEST_CASE("the bare samples dialect is accepted") {
  const auto m = parse_samples_csv(kReferenceSamples);
  CHECK(m.node_ids.size() == 7);
  const auto t = MetricsTable::compute(m);
  CHECK(std::abs(t.per_level.at(2) - 0.346) <= 0.001);
  CHECK(std::abs(t.per_level.at(3) - 0.343) <= 0.001);
  CHECK(std::abs(t.per_level.at(4) - 0.341) <= 0.001);
  CHECK(std::abs(t.overall.by_node - 0.344) <= 0.002);
}

TEST_CASE("empty or malformed CSVs are rejected") {
  CHECK_THROWS_AS(parse_samples_csv(""), Error);
  CHECK_THROWS_AS(parse_samples_csv("node_id,level,sample\n"), Error);
  CHECK_THROWS_AS(parse_samples_csv("a,b\n1,2\n"), Error);
  try {
    parse_samples_csv("node_id,level,sample\n");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::IncompleteData);
  }
}

TEST_CASE("the rendered table rounds the aggregates to three decimals") {
  const auto t = MetricsTable::compute(parse_samples_csv(kReferenceSamples));
  const std::string text = render_table_text(t);
  CHECK(text.find("0.346") != std::string::npos);  // level 2: 0.34625
  CHECK(text.find("0.344") != std::string::npos);  // level 3: 0.3435 rounds up
  CHECK(text.find("0.341") != std::string::npos);  // level 4
  CHECK(text.find("by-node   0.345") != std::string::npos);
  const std::string csv = render_table_csv(t);
  CHECK(csv.find("level,2,0.346250") != std::string::npos);
  CHECK(csv.find("overall,by_node,") != std::string::npos);
}

TEST_CASE("rendering is deterministic") {
  const auto t = MetricsTable::compute(parse_samples_csv(kReferenceSamples));
  CHECK(render_table_text(t) == render_table_text(t));
  CHECK(render_table_csv(t) == render_table_csv(t));
}

TEST_CASE("per-level sample files carry the level mean as a constant column") {
  const auto campaign = small_campaign();
  const auto m = SampleMatrix::from_campaign(campaign);
  const auto t = MetricsTable::compute(m);
  const std::string csv = level_times_csv(m, t, 3);
  CHECK(csv.rfind("trial,t_n13,t_n14,level_mean\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 2);  // header + 2 trials
}

TEST_CASE("sweep CSV layout") {
  const std::vector<SweepRow> rows{{2, 3, 250.0, 30}, {3, 4, 260.5, 40}};
  const std::string csv = sweep_csv(rows);
  CHECK(csv ==
        "fan_in,total_dependencies,mean_reinstatement_ms,samples\n"
        "2,3,250.000000,30\n"
        "3,4,260.500000,40\n");
}

}  // TEST_SUITE
