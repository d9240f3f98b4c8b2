// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "engine.hpp"
#include "trace.hpp"

namespace swarmft {

struct Violation {
  double t = 0.0;
  std::string what;
};

/// Replays a trial's full event trace and checks the protocol invariants:
/// exactly-once task ownership, migration adjacency, no data loss across
/// handovers, no message addressed to a stale coordinate, single-hop policy
/// for probes and spawns, rebind acknowledgment closure, grace-window
/// semantics, and causality of the event order. Returns every violation
/// found; an empty result means the trial is clean.
std::vector<Violation> validate_trial(const TrialTrace& trace, const TrialOutcome& outcome,
                                      const ExperimentConfig& cfg);

}  // namespace swarmft
