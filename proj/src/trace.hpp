// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "agent.hpp"
#include "config.hpp"
#include "json.hpp"
#include "topology.hpp"

namespace swarmft {

/// Wire-visible message kinds. Tags 1-6 are the migration protocol; tag 7 is
/// the reduction data flow.
enum class MsgType {
  Probe = 1,
  ProbeAck = 2,
  Spawn = 3,
  Transfer = 4,
  Rebind = 5,
  RebindAck = 6,
  Data = 7,
};

const char* to_string(MsgType t);

enum class FailReason {
  None,
  NoEscapeRoute,
  SpawnFailed,
  TransferIncomplete,
  AckTimeout,
  GraceWindowExceeded,
};

const char* to_string(FailReason r);

// --- trace event bodies ----------------------------------------------------

struct EvRoundStart { int round; };
struct EvRoundEnd { int round; double result; double expected; };
struct EvSensor { Coord node; double temperature; };
struct EvPrediction { Coord node; double temperature; };
struct EvStatusChange { Coord node; NodeStatus status; };
struct EvMsgSend {
  MsgType type;
  uint64_t mid;
  int src_agent;  // agent/task id; feed ids negative; 0 = node-level daemon
  int dst_agent;
  Coord src;
  Coord dst;
  int dep_id;
  double value;
  int round;
  int value_count;
  Coord new_loc;
};
struct EvMsgDeliver { MsgType type; uint64_t mid; int dst_agent; Coord dst; };
struct EvMsgDrop { MsgType type; uint64_t mid; std::string why; };
struct EvPerception { int agent; int alive_nodes; int alive_agents; bool failure_flagged; };
struct EvDecide { int agent; Coord target; int candidates; int unoccupied; };
struct EvSpawnStart { int agent; Coord from; Coord to; };
struct EvSpawnComplete { int agent; Coord at; };
struct EvTransferStart { int agent; Coord from; Coord to; std::vector<double> payload; };
struct EvHandover { int agent; int task; Coord from; Coord to; std::vector<double> payload; };
struct EvRebindApplied { int agent; int dep_id; Coord new_loc; bool changed; };
struct EvMigrationDone { MigrationRecord record; };
struct EvHardFail { Coord node; };
struct EvNoEscape { int agent; Coord at; };
struct EvTrialFail { FailReason reason; std::string detail; };
struct EvPolicyViolation { std::string what; Coord src; Coord dst; };
struct EvAgentSnapshot { int agent; int task; Coord loc; std::map<int, Coord> deps; };

using TraceBody =
    std::variant<EvRoundStart, EvRoundEnd, EvSensor, EvPrediction, EvStatusChange, EvMsgSend,
                 EvMsgDeliver, EvMsgDrop, EvPerception, EvDecide, EvSpawnStart, EvSpawnComplete,
                 EvTransferStart, EvHandover, EvRebindApplied, EvMigrationDone, EvHardFail,
                 EvNoEscape, EvTrialFail, EvPolicyViolation, EvAgentSnapshot>;

struct TraceEvent {
  double t = 0.0;
  TraceBody body;
};

/// Full in-memory record of one trial. The engine always collects everything;
/// the configured trace level only filters what gets written to disk.
struct TrialTrace {
  nlohmann::json meta;  // topology, placement, task graph, schedule, seed
  std::vector<TraceEvent> events;
};

nlohmann::json trace_event_json(const TraceEvent& ev);

/// True when the event belongs in a protocol-level trace file. Full traces
/// additionally carry sensor ticks and data-plane messages.
bool is_protocol_event(const TraceEvent& ev);

void write_trace_jsonl(const TrialTrace& trace, std::ostream& out, TraceLevel level);

}  // namespace swarmft
