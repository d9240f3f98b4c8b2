// SPDX-License-Identifier: Apache-2.0
#include <algorithm>

#include "doctest.h"
#include "engine.hpp"
#include "validate.hpp"

using namespace swarmft;

namespace {

// a clean run to tamper with
struct Fixture {
  ExperimentConfig cfg;
  TrialTrace trace;
  TrialOutcome out;

  Fixture() {
    cfg.rounds = 60;
    out = run_trial(cfg, 77, 0, {FaultEntry{13, -1.0, cfg.ramp_rate}}, &trace);
    cfg.resolve_grid();
  }
};

bool mentions(const std::vector<Violation>& vs, const std::string& needle) {
  return std::any_of(vs.begin(), vs.end(), [&](const Violation& v) {
    return v.what.find(needle) != std::string::npos;
  });
}

}  // namespace

TEST_SUITE("validate") {

TEST_CASE("a clean trial has no violations") {
  Fixture f;
  CHECK(validate_trial(f.trace, f.out, f.cfg).empty());
}

TEST_CASE("a non-adjacent migration is flagged") {
  Fixture f;
  for (auto& ev : f.trace.events) {
    if (auto* md = std::get_if<EvMigrationDone>(&ev.body)) {
      md->record.to = Coord{0, 0};  // far away from (2,2)
    }
  }
  CHECK(mentions(validate_trial(f.trace, f.out, f.cfg), "not a single Moore hop"));
}

TEST_CASE("payload loss between transfer and reinstatement is flagged") {
  Fixture f;
  for (auto& ev : f.trace.events) {
    if (auto* h = std::get_if<EvHandover>(&ev.body)) {
      if (!h->payload.empty()) h->payload.back() += 1.0;
    }
  }
  CHECK(mentions(validate_trial(f.trace, f.out, f.cfg), "payload changed"));
}

TEST_CASE("a message to a stale coordinate is flagged") {
  Fixture f;
  // find the migration target, then forge a late send to the vacated cell
  Coord vacated{-1, -1};
  double when = 0.0;
  for (const auto& ev : f.trace.events) {
    if (const auto* h = std::get_if<EvHandover>(&ev.body)) {
      vacated = h->from;
      when = ev.t;
    }
  }
  REQUIRE(vacated.row >= 0);
  EvMsgSend forged{};
  forged.type = MsgType::Data;
  forged.mid = 999999;
  forged.src_agent = 9;
  forged.dst_agent = 13;
  forged.src = Coord{1, 3};
  forged.dst = vacated;
  forged.round = 0;
  f.trace.events.push_back(TraceEvent{when + 1.0, forged});
  // keep event times sorted for the causality check
  std::stable_sort(f.trace.events.begin(), f.trace.events.end(),
                   [](const TraceEvent& a, const TraceEvent& b) { return a.t < b.t; });
  const auto vs = validate_trial(f.trace, f.out, f.cfg);
  CHECK(mentions(vs, "but the agent owns"));
}

TEST_CASE("rebind undercount is flagged") {
  Fixture f;
  for (auto& ev : f.trace.events) {
    if (auto* md = std::get_if<EvMigrationDone>(&ev.body)) {
      md->record.rebind_count += 1;
    }
  }
  CHECK(mentions(validate_trial(f.trace, f.out, f.cfg), "rebinds"));
}

TEST_CASE("survival contradictions are flagged") {
  Fixture f;
  TrialOutcome lied = f.out;
  lied.survived = false;
  lied.reason = FailReason::AckTimeout;
  CHECK(mentions(validate_trial(f.trace, lied, f.cfg), "no failure"));

  TrialOutcome wrong = f.out;
  REQUIRE_FALSE(wrong.round_results.empty());
  wrong.round_results[0] += 1.0;
  CHECK(mentions(validate_trial(f.trace, wrong, f.cfg), "reference reduction"));
}

TEST_CASE("out-of-order event times are flagged") {
  Fixture f;
  REQUIRE(f.trace.events.size() > 2);
  std::swap(f.trace.events.front(), f.trace.events.back());
  CHECK(mentions(validate_trial(f.trace, f.out, f.cfg), "backwards"));
}

}  // TEST_SUITE
