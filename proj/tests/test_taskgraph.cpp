// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "rng.hpp"
#include "taskgraph.hpp"

using namespace swarmft;

TEST_SUITE("taskgraph") {

TEST_CASE("8-leaf binary tree has the expected structure") {
  const auto g = TaskGraph::binary_reduction(8);
  CHECK(g.node_count() == 15);
  CHECK(g.level_count() == 4);
  CHECK(g.level_ids(1) == std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8});
  CHECK(g.level_ids(2) == std::vector<int>{9, 10, 11, 12});
  CHECK(g.level_ids(3) == std::vector<int>{13, 14});
  CHECK(g.level_ids(4) == std::vector<int>{15});

  const auto& n13 = g.node(13);
  CHECK(n13.input_deps == std::vector<int>{9, 10});
  CHECK(n13.output_dep == 15);

  const auto& n1 = g.node(1);
  CHECK(n1.input_deps == std::vector<int>{TaskGraph::feed_id(0)});
  CHECK(n1.output_dep == 9);

  CHECK_FALSE(g.node(15).output_dep.has_value());
}

TEST_CASE("2-leaf tree is the smallest") {
  const auto g = TaskGraph::binary_reduction(2);
  CHECK(g.node_count() == 3);
  CHECK(g.node(3).input_deps == std::vector<int>{1, 2});
}

TEST_CASE("16-leaf tree level sizes by brute force") {
  const auto g = TaskGraph::binary_reduction(16);
  CHECK(g.node_count() == 31);
  CHECK(g.level_count() == 5);
  const std::vector<size_t> expect{16, 8, 4, 2, 1};
  for (int level = 1; level <= 5; ++level) {
    CHECK(g.level_ids(level).size() == expect[level - 1]);
  }
}

TEST_CASE("non-power-of-two leaf counts are rejected") {
  for (int bad : {0, 1, 3, 6, 12}) {
    CHECK_THROWS_AS(TaskGraph::binary_reduction(bad), Error);
  }
}

TEST_CASE("fan-in 2 equals the binary builder") {
  const auto a = TaskGraph::binary_reduction(8);
  const auto b = TaskGraph::fanin_reduction(8, 2);
  REQUIRE(a.node_count() == b.node_count());
  for (int id = 1; id <= a.node_count(); ++id) {
    CHECK(a.node(id).level == b.node(id).level);
    CHECK(a.node(id).input_deps == b.node(id).input_deps);
    CHECK(a.node(id).output_dep == b.node(id).output_dep);
  }
}

TEST_CASE("fan-in 3 with 9 leaves") {
  const auto g = TaskGraph::fanin_reduction(9, 3);
  CHECK(g.node_count() == 13);
  CHECK(g.level_count() == 3);
  CHECK(g.level_ids(1).size() == 9);
  CHECK(g.level_ids(2).size() == 3);
  CHECK(g.level_ids(3).size() == 1);
}

TEST_CASE("fan-in 4: internal nodes carry 4 inputs and 1 output") {
  const auto g = TaskGraph::fanin_reduction(16, 4);
  for (int id : g.computational_nodes()) {
    const auto& n = g.node(id);
    CHECK(n.input_deps.size() == 4);
    const int total = static_cast<int>(n.input_deps.size()) + (n.output_dep ? 1 : 0);
    if (id != g.root_id()) CHECK(total == 5);
  }
}

TEST_CASE("invalid fan-in configurations") {
  CHECK_THROWS_AS(TaskGraph::fanin_reduction(8, 1), Error);
  CHECK_THROWS_AS(TaskGraph::fanin_reduction(6, 4), Error);
  CHECK_THROWS_AS(TaskGraph::fanin_reduction(2, 3), Error);
}

TEST_CASE("reduce_reference folds the feed") {
  const auto g = TaskGraph::binary_reduction(8);
  CHECK(g.reduce_reference(std::vector<double>{1, 1, 1, 1, 1, 1, 1, 1}) == 8);
  CHECK(g.reduce_reference(std::vector<double>{0, 0, 0, 0, 0, 0, 0, 0}) == 0);
  CHECK(g.reduce_reference(std::vector<double>{3, 1, 4, 1, 5, 9, 2, 6}) == 31);
  CHECK_THROWS_AS(g.reduce_reference(std::vector<double>{1, 2, 3}), Error);
}

TEST_CASE("computational nodes are the non-leaves in level order") {
  CHECK(TaskGraph::binary_reduction(8).computational_nodes() ==
        std::vector<int>{9, 10, 11, 12, 13, 14, 15});
  CHECK(TaskGraph::binary_reduction(2).computational_nodes() == std::vector<int>{3});
  CHECK(TaskGraph::binary_reduction(16).computational_nodes().size() == 15);
}

TEST_CASE("node count and level structure invariants") {
  for (int leaves : {2, 4, 8, 16, 32}) {
    const auto g = TaskGraph::binary_reduction(leaves);
    CHECK(g.node_count() == 2 * leaves - 1);
    for (int id = 1; id <= g.node_count(); ++id) {
      const auto& n = g.node(id);
      if (n.level == 1) continue;
      int max_dep_level = 0;
      for (int dep : n.input_deps) {
        CHECK_FALSE(TaskGraph::is_feed(dep));
        max_dep_level = std::max(max_dep_level, g.node(dep).level);
        CHECK(g.node(dep).output_dep == id);  // child points one level up
      }
      CHECK(n.level == 1 + max_dep_level);
    }
  }
}

TEST_CASE("reference reduction is permutation-invariant for sums") {
  const auto g = TaskGraph::binary_reduction(8);
  Rng rng(7);
  for (int iter = 0; iter < 50; ++iter) {
    std::vector<double> feed(8);
    for (auto& v : feed) v = static_cast<double>(rng.below(1001));
    const double base = g.reduce_reference(feed);
    // Fisher-Yates shuffle with the deterministic rng
    for (size_t i = feed.size(); i > 1; --i) {
      std::swap(feed[i - 1], feed[rng.below(i)]);
    }
    CHECK(g.reduce_reference(feed) == base);
  }
}

}  // TEST_SUITE
