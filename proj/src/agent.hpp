// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <set>
#include <vector>

#include "rng.hpp"
#include "topology.hpp"

namespace swarmft {

/// Off-grid endpoint used for external feeds: messages to/from it count as
/// one hop regardless of the agent's position.
inline constexpr Coord kExternalCoord{-1, -1};

enum class AgentPhase { Idle, Perceiving, Deciding, Migrating, Rebinding };

const char* to_string(AgentPhase p);

struct SensorReading {
  Coord node{-1, -1};
  double temperature = 0.0;
  double timestamp = -1.0;  // simulated ms
};

/// Reply to an "are you alive" probe: the probed node's status, its latest
/// sensor reading, and the agents resident on it.
struct ProbeAck {
  Coord node;
  NodeStatus status = NodeStatus::Healthy;
  SensorReading sensor;
  std::vector<int> resident_agents;
};

/// What one probe round told the agent about its surroundings.
struct Perception {
  std::set<int> alive_agents;
  std::set<Coord> alive_nodes;
  SensorReading own_sensor;
  std::map<Coord, SensorReading> neighbor_sensors;
  std::map<Coord, NodeStatus> node_status;
  std::map<Coord, int> resident_counts;
  bool failure_predicted = false;  // own node above threshold
};

Perception assemble_perception(const std::vector<ProbeAck>& acks, const SensorReading& own,
                               double threshold);

/// Picks the migration target: a uniformly random healthy, alive neighbor,
/// preferring unoccupied cells over occupied ones. Throws NoEscapeRoute when
/// no healthy alive neighbor exists.
Coord decide_target(const Perception& p, const std::vector<Coord>& healthy_neighbors, Rng& rng);

/// Applies a rebind notification to a dependency table. Returns true when the
/// entry changed (false for duplicate deliveries, which are idempotent).
/// Throws UnknownDependency if dep_id is not in the table.
bool update_knowledge(std::map<int, Coord>& table, int dep_id, Coord new_coord);

struct MigrationRecord {
  int agent_id = 0;
  int task_id = 0;
  int level = 0;
  Coord from;
  Coord to;
  double prediction_time = 0.0;  // first over-threshold reading on the source node
  double start_time = 0.0;       // spawn request sent
  double end_time = 0.0;         // last rebind acknowledgment received
  int rebind_count = 0;
};

}  // namespace swarmft
