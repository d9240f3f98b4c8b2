// SPDX-License-Identifier: Apache-2.0
#include "trace.hpp"

namespace swarmft {

const char* to_string(MsgType t) {
  switch (t) {
    case MsgType::Probe: return "probe";
    case MsgType::ProbeAck: return "probe_ack";
    case MsgType::Spawn: return "spawn";
    case MsgType::Transfer: return "transfer";
    case MsgType::Rebind: return "rebind";
    case MsgType::RebindAck: return "rebind_ack";
    case MsgType::Data: return "data";
  }
  return "?";
}

const char* to_string(FailReason r) {
  switch (r) {
    case FailReason::None: return "none";
    case FailReason::NoEscapeRoute: return "no_escape_route";
    case FailReason::SpawnFailed: return "spawn_failed";
    case FailReason::TransferIncomplete: return "transfer_incomplete";
    case FailReason::AckTimeout: return "ack_timeout";
    case FailReason::GraceWindowExceeded: return "grace_window_exceeded";
  }
  return "?";
}

namespace {

nlohmann::json coord_json(Coord c) {
  if (c == kExternalCoord) return "ext";
  return nlohmann::json::array({c.row, c.col});
}

struct JsonVisitor {
  nlohmann::json& j;

  void operator()(const EvRoundStart& e) const {
    j["kind"] = "round_start";
    j["round"] = e.round;
  }
  void operator()(const EvRoundEnd& e) const {
    j["kind"] = "round_end";
    j["round"] = e.round;
    j["result"] = e.result;
    j["expected"] = e.expected;
  }
  void operator()(const EvSensor& e) const {
    j["kind"] = "sensor";
    j["node"] = coord_json(e.node);
    j["temperature"] = e.temperature;
  }
  void operator()(const EvPrediction& e) const {
    j["kind"] = "prediction";
    j["node"] = coord_json(e.node);
    j["temperature"] = e.temperature;
  }
  void operator()(const EvStatusChange& e) const {
    j["kind"] = "status";
    j["node"] = coord_json(e.node);
    j["status"] = to_string(e.status);
  }
  void operator()(const EvMsgSend& e) const {
    j["kind"] = "msg_send";
    j["mtype"] = static_cast<int>(e.type);
    j["mid"] = e.mid;
    j["src_agent"] = e.src_agent;
    j["dst_agent"] = e.dst_agent;
    j["src"] = coord_json(e.src);
    j["dst"] = coord_json(e.dst);
    if (e.type == MsgType::Data) {
      j["dep"] = e.dep_id;
      j["value"] = e.value;
      j["round"] = e.round;
    }
    if (e.type == MsgType::Transfer) j["values"] = e.value_count;
    if (e.type == MsgType::Rebind) {
      j["dep"] = e.dep_id;
      j["new_loc"] = coord_json(e.new_loc);
    }
  }
  void operator()(const EvMsgDeliver& e) const {
    j["kind"] = "msg_deliver";
    j["mtype"] = static_cast<int>(e.type);
    j["mid"] = e.mid;
    j["dst_agent"] = e.dst_agent;
    j["dst"] = coord_json(e.dst);
  }
  void operator()(const EvMsgDrop& e) const {
    j["kind"] = "msg_drop";
    j["mtype"] = static_cast<int>(e.type);
    j["mid"] = e.mid;
    j["why"] = e.why;
  }
  void operator()(const EvPerception& e) const {
    j["kind"] = "perception";
    j["agent"] = e.agent;
    j["alive_nodes"] = e.alive_nodes;
    j["alive_agents"] = e.alive_agents;
    j["failure_flagged"] = e.failure_flagged;
  }
  void operator()(const EvDecide& e) const {
    j["kind"] = "decide";
    j["agent"] = e.agent;
    j["target"] = coord_json(e.target);
    j["candidates"] = e.candidates;
    j["unoccupied"] = e.unoccupied;
  }
  void operator()(const EvSpawnStart& e) const {
    j["kind"] = "spawn_start";
    j["agent"] = e.agent;
    j["from"] = coord_json(e.from);
    j["to"] = coord_json(e.to);
  }
  void operator()(const EvSpawnComplete& e) const {
    j["kind"] = "spawn_complete";
    j["agent"] = e.agent;
    j["at"] = coord_json(e.at);
  }
  void operator()(const EvTransferStart& e) const {
    j["kind"] = "transfer_start";
    j["agent"] = e.agent;
    j["from"] = coord_json(e.from);
    j["to"] = coord_json(e.to);
    j["values"] = static_cast<int>(e.payload.size());
  }
  void operator()(const EvHandover& e) const {
    j["kind"] = "handover";
    j["agent"] = e.agent;
    j["task"] = e.task;
    j["from"] = coord_json(e.from);
    j["to"] = coord_json(e.to);
    j["values"] = static_cast<int>(e.payload.size());
  }
  void operator()(const EvRebindApplied& e) const {
    j["kind"] = "rebind_applied";
    j["agent"] = e.agent;
    j["dep"] = e.dep_id;
    j["new_loc"] = coord_json(e.new_loc);
    j["changed"] = e.changed;
  }
  void operator()(const EvMigrationDone& e) const {
    j["kind"] = "migration_done";
    j["agent"] = e.record.agent_id;
    j["task"] = e.record.task_id;
    j["level"] = e.record.level;
    j["from"] = coord_json(e.record.from);
    j["to"] = coord_json(e.record.to);
    j["prediction_t"] = e.record.prediction_time;
    j["start_t"] = e.record.start_time;
    j["end_t"] = e.record.end_time;
    j["rebinds"] = e.record.rebind_count;
  }
  void operator()(const EvHardFail& e) const {
    j["kind"] = "hard_fail";
    j["node"] = coord_json(e.node);
  }
  void operator()(const EvNoEscape& e) const {
    j["kind"] = "no_escape";
    j["agent"] = e.agent;
    j["at"] = coord_json(e.at);
  }
  void operator()(const EvTrialFail& e) const {
    j["kind"] = "trial_fail";
    j["reason"] = to_string(e.reason);
    j["detail"] = e.detail;
  }
  void operator()(const EvPolicyViolation& e) const {
    j["kind"] = "policy_violation";
    j["what"] = e.what;
    j["src"] = coord_json(e.src);
    j["dst"] = coord_json(e.dst);
  }
  void operator()(const EvAgentSnapshot& e) const {
    j["kind"] = "agent_snapshot";
    j["agent"] = e.agent;
    j["task"] = e.task;
    j["loc"] = coord_json(e.loc);
    nlohmann::json deps = nlohmann::json::object();
    for (const auto& [id, c] : e.deps) deps[std::to_string(id)] = coord_json(c);
    j["deps"] = std::move(deps);
  }
};

}  // namespace

nlohmann::json trace_event_json(const TraceEvent& ev) {
  nlohmann::json j;
  j["t"] = ev.t;
  std::visit(JsonVisitor{j}, ev.body);
  return j;
}

bool is_protocol_event(const TraceEvent& ev) {
  if (std::holds_alternative<EvSensor>(ev.body)) return false;
  if (const auto* s = std::get_if<EvMsgSend>(&ev.body)) return s->type != MsgType::Data;
  if (const auto* d = std::get_if<EvMsgDeliver>(&ev.body)) return d->type != MsgType::Data;
  return true;
}

void write_trace_jsonl(const TrialTrace& trace, std::ostream& out, TraceLevel level) {
  if (level == TraceLevel::Off) return;
  nlohmann::json meta = trace.meta;
  meta["kind"] = "trial_meta";
  out << meta.dump() << '\n';
  for (const auto& ev : trace.events) {
    if (level == TraceLevel::Protocol && !is_protocol_event(ev)) continue;
    out << trace_event_json(ev).dump() << '\n';
  }
}

}  // namespace swarmft
