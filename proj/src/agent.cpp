// SPDX-License-Identifier: Apache-2.0
#include "agent.hpp"

#include <algorithm>

namespace swarmft {

const char* to_string(AgentPhase p) {
  switch (p) {
    case AgentPhase::Idle: return "idle";
    case AgentPhase::Perceiving: return "perceiving";
    case AgentPhase::Deciding: return "deciding";
    case AgentPhase::Migrating: return "migrating";
    case AgentPhase::Rebinding: return "rebinding";
  }
  return "?";
}

Perception assemble_perception(const std::vector<ProbeAck>& acks, const SensorReading& own,
                               double threshold) {
  Perception p;
  p.own_sensor = own;
  p.failure_predicted = own.temperature > threshold;
  for (const auto& ack : acks) {
    p.alive_nodes.insert(ack.node);
    p.neighbor_sensors[ack.node] = ack.sensor;
    p.node_status[ack.node] = ack.status;
    p.resident_counts[ack.node] = static_cast<int>(ack.resident_agents.size());
    for (int id : ack.resident_agents) p.alive_agents.insert(id);
  }
  return p;
}

Coord decide_target(const Perception& p, const std::vector<Coord>& healthy_neighbors, Rng& rng) {
  std::vector<Coord> candidates;
  for (const Coord c : healthy_neighbors) {
    if (p.alive_nodes.count(c)) candidates.push_back(c);
  }
  if (candidates.empty()) {
    fail(Errc::NoEscapeRoute, "no healthy, alive neighbor to migrate to");
  }
  std::vector<Coord> unoccupied;
  for (const Coord c : candidates) {
    auto it = p.resident_counts.find(c);
    if (it == p.resident_counts.end() || it->second == 0) unoccupied.push_back(c);
  }
  const auto& pool = unoccupied.empty() ? candidates : unoccupied;
  return pool[rng.below(pool.size())];
}

bool update_knowledge(std::map<int, Coord>& table, int dep_id, Coord new_coord) {
  auto it = table.find(dep_id);
  if (it == table.end()) {
    fail(Errc::UnknownDependency, "rebind from id " + std::to_string(dep_id) +
                                      " which is not a dependency of this agent");
  }
  if (it->second == new_coord) return false;
  it->second = new_coord;
  return true;
}

}  // namespace swarmft
