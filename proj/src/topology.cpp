// SPDX-License-Identifier: Apache-2.0
#include "topology.hpp"

#include <stdexcept>

namespace swarmft {

const char* to_string(NodeStatus s) {
  switch (s) {
    case NodeStatus::Healthy: return "healthy";
    case NodeStatus::PredictedFailing: return "predicted_failing";
    case NodeStatus::Failed: return "failed";
  }
  return "?";
}

std::string to_string(Coord c) {
  return "(" + std::to_string(c.row) + "," + std::to_string(c.col) + ")";
}

GridTopology GridTopology::build(int node_count, int rows, int cols) {
  if (node_count < 1 || rows < 1 || cols < 1) {
    fail(Errc::DimensionMismatch, "node_count, rows and cols must all be >= 1");
  }
  if (rows * cols != node_count) {
    fail(Errc::DimensionMismatch,
         std::to_string(rows) + "x" + std::to_string(cols) + " grid cannot hold exactly " +
             std::to_string(node_count) + " nodes");
  }
  GridTopology g;
  g.rows_ = rows;
  g.cols_ = cols;
  g.status_.assign(static_cast<size_t>(node_count), NodeStatus::Healthy);
  return g;
}

Coord GridTopology::coord_of(int physical_id) const {
  if (physical_id < 0 || physical_id >= node_count()) {
    fail(Errc::InvalidCoordinate, "physical id " + std::to_string(physical_id) + " out of range");
  }
  return Coord{physical_id / cols_, physical_id % cols_};
}

int GridTopology::physical_at(Coord c) const {
  check_coord(c);
  return c.row * cols_ + c.col;
}

NodeStatus GridTopology::status(Coord c) const { return status_[physical_at(c)]; }

NodeStatus GridTopology::status_of(int physical_id) const {
  if (physical_id < 0 || physical_id >= node_count()) {
    fail(Errc::InvalidCoordinate, "physical id " + std::to_string(physical_id) + " out of range");
  }
  return status_[physical_id];
}

void GridTopology::set_status(Coord c, NodeStatus next) {
  auto& cur = status_[physical_at(c)];
  if (cur == next) return;
  const bool legal = (cur == NodeStatus::Healthy && next == NodeStatus::PredictedFailing) ||
                     (cur == NodeStatus::Healthy && next == NodeStatus::Failed) ||
                     (cur == NodeStatus::PredictedFailing && next == NodeStatus::Failed);
  if (!legal) {
    throw std::logic_error(std::string("illegal status transition ") + to_string(cur) + " -> " +
                           to_string(next) + " at " + to_string(c));
  }
  cur = next;
}

std::vector<Coord> GridTopology::neighbors(Coord at) const {
  check_coord(at);
  std::vector<Coord> out;
  out.reserve(8);
  for (int dr = -1; dr <= 1; ++dr) {
    for (int dc = -1; dc <= 1; ++dc) {
      if (dr == 0 && dc == 0) continue;
      const Coord c{at.row + dr, at.col + dc};
      if (contains(c)) out.push_back(c);
    }
  }
  return out;  // already sorted: row-major scan order
}

std::vector<Coord> GridTopology::healthy_neighbors(Coord at) const {
  std::vector<Coord> out;
  for (const Coord c : neighbors(at)) {
    if (status(c) == NodeStatus::Healthy) out.push_back(c);
  }
  return out;
}

void GridTopology::check_coord(Coord c) const {
  if (!contains(c)) {
    fail(Errc::InvalidCoordinate, to_string(c) + " outside " + std::to_string(rows_) + "x" +
                                      std::to_string(cols_) + " grid");
  }
}

}  // namespace swarmft
