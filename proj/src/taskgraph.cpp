// SPDX-License-Identifier: Apache-2.0
#include "taskgraph.hpp"

#include <string>

namespace swarmft {

namespace {

bool is_power_of(int n, int base) {
  if (n < base) return false;
  while (n > 1) {
    if (n % base != 0) return false;
    n /= base;
  }
  return true;
}

}  // namespace

TaskGraph TaskGraph::binary_reduction(int leaf_count) {
  if (leaf_count < 2 || (leaf_count & (leaf_count - 1)) != 0) {
    fail(Errc::InvalidLeafCount,
         "binary reduction needs a power-of-two leaf count >= 2, got " + std::to_string(leaf_count));
  }
  return fanin_reduction(leaf_count, 2);
}

TaskGraph TaskGraph::fanin_reduction(int leaf_count, int fan_in) {
  if (fan_in < 2) fail(Errc::InvalidFanIn, "fan-in must be >= 2, got " + std::to_string(fan_in));
  if (!is_power_of(leaf_count, fan_in)) {
    fail(Errc::InvalidLeafCount, "leaf count " + std::to_string(leaf_count) +
                                     " is not a positive power of fan-in " + std::to_string(fan_in));
  }

  TaskGraph g;
  g.leaf_count_ = leaf_count;
  g.fan_in_ = fan_in;

  // Ids are assigned level by level starting at 1.
  int next_id = 1;
  std::vector<int> prev;
  prev.reserve(leaf_count);
  g.levels_.emplace_back();
  for (int i = 0; i < leaf_count; ++i) {
    ReductionNode n;
    n.id = next_id++;
    n.level = 1;
    n.input_deps = {feed_id(i)};
    g.levels_.back().push_back(n.id);
    prev.push_back(n.id);
    g.nodes_.push_back(std::move(n));
  }

  int level = 2;
  while (prev.size() > 1) {
    const int width = static_cast<int>(prev.size()) / fan_in;
    std::vector<int> cur;
    cur.reserve(width);
    g.levels_.emplace_back();
    for (int j = 0; j < width; ++j) {
      ReductionNode n;
      n.id = next_id++;
      n.level = level;
      for (int k = 0; k < fan_in; ++k) {
        const int child = prev[static_cast<size_t>(j) * fan_in + k];
        n.input_deps.push_back(child);
        g.nodes_[child - 1].output_dep = n.id;
      }
      g.levels_.back().push_back(n.id);
      cur.push_back(n.id);
      g.nodes_.push_back(std::move(n));
    }
    prev = std::move(cur);
    ++level;
  }
  return g;
}

const ReductionNode& TaskGraph::node(int id) const {
  if (!contains(id)) fail(Errc::UnknownNode, "node id " + std::to_string(id));
  return nodes_[id - 1];
}

ReductionNode& TaskGraph::node(int id) {
  if (!contains(id)) fail(Errc::UnknownNode, "node id " + std::to_string(id));
  return nodes_[id - 1];
}

const std::vector<int>& TaskGraph::level_ids(int level) const {
  if (level < 1 || level > level_count()) fail(Errc::UnknownNode, "level " + std::to_string(level));
  return levels_[level - 1];
}

std::vector<int> TaskGraph::computational_nodes() const {
  std::vector<int> out;
  for (int level = 2; level <= level_count(); ++level) {
    for (int id : levels_[level - 1]) out.push_back(id);
  }
  return out;
}

double TaskGraph::reduce_reference(std::span<const double> feed) const {
  if (static_cast<int>(feed.size()) != leaf_count_) {
    fail(Errc::FeedSizeMismatch, "expected " + std::to_string(leaf_count_) + " feed values, got " +
                                     std::to_string(feed.size()));
  }
  double acc = feed[0];
  for (size_t i = 1; i < feed.size(); ++i) acc = op_(acc, feed[i]);
  return acc;
}

nlohmann::json TaskGraph::to_json() const {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : nodes_) {
    nlohmann::json j{{"id", n.id}, {"level", n.level}, {"input_deps", n.input_deps}};
    if (n.output_dep) {
      j["output_dep"] = *n.output_dep;
    } else {
      j["output_dep"] = nullptr;
    }
    nodes.push_back(std::move(j));
  }
  return nlohmann::json{{"leaves", leaf_count_},
                        {"fan_in", fan_in_},
                        {"node_count", node_count()},
                        {"levels", level_count()},
                        {"nodes", std::move(nodes)}};
}

}  // namespace swarmft
