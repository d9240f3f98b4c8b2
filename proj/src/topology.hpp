// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <string>
#include <vector>

#include "error.hpp"

namespace swarmft {

enum class NodeStatus { Healthy, PredictedFailing, Failed };

const char* to_string(NodeStatus s);

struct Coord {
  int row = -1;
  int col = -1;
  friend auto operator<=>(const Coord&, const Coord&) = default;
};

std::string to_string(Coord c);

/// Chebyshev distance: the number of single-cell Moore hops between two cells.
inline int chebyshev(Coord a, Coord b) {
  const int dr = a.row > b.row ? a.row - b.row : b.row - a.row;
  const int dc = a.col > b.col ? a.col - b.col : b.col - a.col;
  return dr > dc ? dr : dc;
}

/// Logical grid abstraction over a set of physical nodes.
///
/// Physical ids 0..N-1 are assigned to cells row-major, so the mapping is a
/// bijection by construction. Adjacency is the Moore neighborhood (up to 8
/// cells, vertically/horizontally/diagonally adjacent), clipped at the grid
/// border; there is no wrap-around. Structure is immutable after build; only
/// per-node status flags change, and only forward
/// (Healthy -> PredictedFailing -> Failed, or Healthy -> Failed).
class GridTopology {
public:
  GridTopology() = default;

  static GridTopology build(int node_count, int rows, int cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int node_count() const { return static_cast<int>(status_.size()); }

  bool contains(Coord c) const {
    return c.row >= 0 && c.row < rows_ && c.col >= 0 && c.col < cols_;
  }

  Coord coord_of(int physical_id) const;
  int physical_at(Coord c) const;

  NodeStatus status(Coord c) const;
  NodeStatus status_of(int physical_id) const;
  void set_status(Coord c, NodeStatus next);

  std::vector<Coord> neighbors(Coord at) const;
  std::vector<Coord> healthy_neighbors(Coord at) const;

private:
  void check_coord(Coord c) const;

  int rows_ = 0;
  int cols_ = 0;
  std::vector<NodeStatus> status_;
};

}  // namespace swarmft
