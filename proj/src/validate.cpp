// SPDX-License-Identifier: Apache-2.0
#include "validate.hpp"

#include <map>
#include <optional>
#include <set>

namespace swarmft {

namespace {

struct AgentTrack {
  Coord owner_loc;
  bool known = false;
  std::optional<Coord> standby;              // spawned, not yet owner
  std::optional<std::vector<double>> in_flight;  // transfer payload
  std::set<int> rebinds_applied;             // dependents reached since handover
  bool migrating_rebind = false;
};

}  // namespace

std::vector<Violation> validate_trial(const TrialTrace& trace, const TrialOutcome& outcome,
                                      const ExperimentConfig& cfg) {
  std::vector<Violation> out;
  auto flag = [&](double t, const std::string& what) { out.push_back(Violation{t, what}); };

  std::map<int, AgentTrack> agents;
  std::set<Coord> vacated;
  bool saw_trial_fail = false;
  double prev_t = 0.0;

  for (const auto& ev : trace.events) {
    if (ev.t + 1e-9 < prev_t) {
      flag(ev.t, "event time went backwards");
    }
    prev_t = std::max(prev_t, ev.t);

    if (const auto* s = std::get_if<EvAgentSnapshot>(&ev.body)) {
      auto& tr = agents[s->agent];
      if (!tr.known) {
        tr.owner_loc = s->loc;
        tr.known = true;
      } else if (tr.owner_loc != s->loc) {
        flag(ev.t, "snapshot coordinate disagrees with tracked owner location for agent " +
                       std::to_string(s->agent));
      }
    } else if (const auto* m = std::get_if<EvMsgSend>(&ev.body)) {
      if ((m->type == MsgType::Probe || m->type == MsgType::Spawn) &&
          m->src != kExternalCoord && m->dst != kExternalCoord && chebyshev(m->src, m->dst) > 1) {
        flag(ev.t, "single-hop message sent beyond the Moore neighborhood");
      }
      if (m->dst_agent >= 1) {
        auto it = agents.find(m->dst_agent);
        if (it == agents.end() || !it->second.known) {
          flag(ev.t, "message addressed to unknown agent " + std::to_string(m->dst_agent));
        } else {
          const bool to_standby =
              it->second.standby && *it->second.standby == m->dst &&
              (m->type == MsgType::Transfer || m->type == MsgType::Spawn);
          if (!to_standby && m->dst != it->second.owner_loc) {
            flag(ev.t, "message to agent " + std::to_string(m->dst_agent) +
                           " addressed to " + to_string(m->dst) + " but the agent owns " +
                           to_string(it->second.owner_loc));
          }
          if (!to_standby && vacated.count(m->dst)) {
            flag(ev.t, "message addressed to vacated coordinate " + to_string(m->dst));
          }
        }
      }
    } else if (const auto* sp = std::get_if<EvSpawnComplete>(&ev.body)) {
      auto& tr = agents[sp->agent];
      if (tr.standby) flag(ev.t, "two standby processes for agent " + std::to_string(sp->agent));
      tr.standby = sp->at;
    } else if (const auto* ts = std::get_if<EvTransferStart>(&ev.body)) {
      agents[ts->agent].in_flight = ts->payload;
    } else if (const auto* h = std::get_if<EvHandover>(&ev.body)) {
      auto& tr = agents[h->agent];
      if (!tr.known || tr.owner_loc != h->from) {
        flag(ev.t, "handover source does not match the owning process of agent " +
                       std::to_string(h->agent));
      }
      if (!tr.standby) {
        flag(ev.t, "handover without a spawned standby process for agent " +
                       std::to_string(h->agent));
      } else if (*tr.standby != h->to) {
        flag(ev.t, "handover target differs from the spawned process location");
      }
      if (!tr.in_flight) {
        flag(ev.t, "handover without a state transfer for agent " + std::to_string(h->agent));
      } else if (*tr.in_flight != h->payload) {
        flag(ev.t, "state payload changed between transfer and reinstatement for agent " +
                       std::to_string(h->agent));
      }
      vacated.insert(h->from);
      tr.owner_loc = h->to;
      tr.standby.reset();
      tr.in_flight.reset();
      tr.rebinds_applied.clear();
      tr.migrating_rebind = true;
    } else if (const auto* rb = std::get_if<EvRebindApplied>(&ev.body)) {
      auto it = agents.find(rb->dep_id);
      if (it != agents.end() && it->second.migrating_rebind) {
        it->second.rebinds_applied.insert(rb->agent);
      }
    } else if (const auto* md = std::get_if<EvMigrationDone>(&ev.body)) {
      const auto& r = md->record;
      if (chebyshev(r.from, r.to) != 1) {
        flag(ev.t, "migration of agent " + std::to_string(r.agent_id) +
                       " is not a single Moore hop: " + to_string(r.from) + " -> " +
                       to_string(r.to));
      }
      if (r.end_time < r.start_time || r.start_time < r.prediction_time) {
        flag(ev.t, "migration timestamps out of order for agent " + std::to_string(r.agent_id));
      }
      auto& tr = agents[r.agent_id];
      if (static_cast<int>(tr.rebinds_applied.size()) != r.rebind_count) {
        flag(ev.t, "agent " + std::to_string(r.agent_id) + " reached " +
                       std::to_string(tr.rebinds_applied.size()) + " dependents but records " +
                       std::to_string(r.rebind_count) + " rebinds");
      }
      tr.migrating_rebind = false;
    } else if (std::get_if<EvTrialFail>(&ev.body)) {
      saw_trial_fail = true;
    } else if (const auto* pv = std::get_if<EvPolicyViolation>(&ev.body)) {
      flag(ev.t, "engine flagged a policy violation: " + pv->what);
    }
  }

  // --- outcome-level invariants ----------------------------------------------
  if (outcome.survived && saw_trial_fail) {
    flag(prev_t, "trial marked survived but the trace records a failure");
  }
  if (!outcome.survived && !saw_trial_fail) {
    flag(prev_t, "trial marked failed but the trace records no failure");
  }
  if (!outcome.survived && outcome.reason == FailReason::None) {
    flag(prev_t, "failed trial carries no failure reason");
  }
  if (outcome.survived) {
    if (static_cast<int>(outcome.round_results.size()) != cfg.rounds) {
      flag(prev_t, "survived trial completed " + std::to_string(outcome.round_results.size()) +
                       " of " + std::to_string(cfg.rounds) + " rounds");
    }
    if (outcome.round_results.size() == outcome.round_expected.size()) {
      for (size_t i = 0; i < outcome.round_results.size(); ++i) {
        if (outcome.round_results[i] != outcome.round_expected[i]) {
          flag(prev_t, "round " + std::to_string(i) + " result " +
                           std::to_string(outcome.round_results[i]) +
                           " differs from the reference reduction " +
                           std::to_string(outcome.round_expected[i]));
        }
      }
    } else {
      flag(prev_t, "result and reference vectors have different lengths");
    }
    for (const auto& r : outcome.migrations) {
      if (r.end_time - r.prediction_time > cfg.grace_window_ms) {
        flag(prev_t, "survived trial contains a migration that overran the grace window");
      }
    }
  }

  return out;
}

}  // namespace swarmft
