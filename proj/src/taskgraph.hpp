// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "error.hpp"
#include "json.hpp"

namespace swarmft {

/// Binary reduction operator; must be associative (summation by default).
using ReduceOp = std::function<double(double, double)>;

/// One node of a reduction tree. Leaves (level 1) have a single external
/// feed as input; internal nodes combine their children. Feed ids are
/// negative so they never collide with node ids.
struct ReductionNode {
  int id = 0;
  int level = 0;
  std::vector<int> input_deps;
  std::optional<int> output_dep;
  std::vector<double> data;  // values currently held (per-round results ledger)
};

class TaskGraph {
public:
  static TaskGraph binary_reduction(int leaf_count);
  static TaskGraph fanin_reduction(int leaf_count, int fan_in);

  /// External feed id for 0-based leaf index i (I_1 = -1, I_2 = -2, ...).
  static int feed_id(int leaf_index) { return -(leaf_index + 1); }
  static bool is_feed(int id) { return id < 0; }

  int node_count() const { return static_cast<int>(nodes_.size()); }
  int leaf_count() const { return leaf_count_; }
  int fan_in() const { return fan_in_; }
  int level_count() const { return static_cast<int>(levels_.size()); }
  int root_id() const { return node_count(); }

  const ReductionNode& node(int id) const;
  ReductionNode& node(int id);
  bool contains(int id) const { return id >= 1 && id <= node_count(); }

  const std::vector<int>& level_ids(int level) const;

  /// Non-leaf node ids, level-ascending then id-ascending.
  std::vector<int> computational_nodes() const;

  /// Folds the operator over one feed vector; the simulator's round results
  /// are checked against this.
  double reduce_reference(std::span<const double> feed) const;

  double apply(double a, double b) const { return op_(a, b); }
  void set_operator(ReduceOp op) { op_ = std::move(op); }

  nlohmann::json to_json() const;

private:
  std::vector<ReductionNode> nodes_;        // index = id - 1
  std::vector<std::vector<int>> levels_;    // index = level - 1
  int leaf_count_ = 0;
  int fan_in_ = 0;
  ReduceOp op_ = [](double a, double b) { return a + b; };
};

}  // namespace swarmft
