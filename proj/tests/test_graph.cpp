#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "lcbp/graph.hpp"
#include "test_support.hpp"

using namespace lcbp;

TEST_CASE("grid construction") {
  const Graph g = build_grid(3, 3);
  CHECK(g.node_count() == 9);
  CHECK(g.edge_count() == 12);
  CHECK(g.neighbors(5) == std::vector<int>{2, 4, 6, 8});
  CHECK(g.neighbors(1) == std::vector<int>{2, 4});

  const Graph single = build_grid(1, 1);
  CHECK(single.node_count() == 1);
  CHECK(single.edge_count() == 0);

  const Graph rect = build_grid(2, 3);
  CHECK(rect.node_count() == 6);
  CHECK(rect.edge_count() == 7);  // rows*(cols-1) + cols*(rows-1)

  CHECK_THROWS_AS(build_grid(0, 3), std::invalid_argument);
}

TEST_CASE("graph invariants") {
  Graph g;
  g.add_edge(1, 2);
  g.add_edge(2, 1);  // duplicate, reversed
  CHECK(g.edge_count() == 1);
  CHECK(g.has_edge(2, 1));
  CHECK_THROWS_AS(g.add_edge(3, 3), std::invalid_argument);
  CHECK_THROWS_AS(g.neighbors(99), std::out_of_range);

  std::mt19937_64 rng(11);
  for (int round = 0; round < 20; ++round) {
    const Graph r = lcbp::testing::random_connected_graph(8, 5, rng);
    for (int v : r.nodes()) {
      for (int w : r.neighbors(v)) {
        const auto& back = r.neighbors(w);
        CHECK(std::find(back.begin(), back.end(), v) != back.end());
      }
      CHECK(std::is_sorted(r.neighbors(v).begin(), r.neighbors(v).end()));
    }
  }
}

TEST_CASE("acyclicity") {
  CHECK_FALSE(is_acyclic(build_grid(3, 3)));
  for (int m = 2; m <= 4; ++m) {
    for (int n = 2; n <= 4; ++n) CHECK_FALSE(is_acyclic(build_grid(m, n)));
  }
  CHECK(is_acyclic(build_grid(1, 7)));

  Graph chain;
  chain.add_edge(1, 2);
  chain.add_edge(2, 3);
  CHECK(is_acyclic(chain));

  Graph empty;
  CHECK(is_acyclic(empty));
  CHECK(empty.connected());
}

TEST_CASE("component of an edge removal") {
  Graph chain;
  chain.add_edge(1, 2);
  chain.add_edge(2, 3);

  const Subtree left = component_of(chain, 1, {1, 2});
  CHECK(left.members == std::set<int>{1});
  const Subtree right = component_of(chain, 2, {1, 2});
  CHECK(right.members == std::set<int>{2, 3});

  CHECK_THROWS_AS(component_of(chain, 1, {1, 3}), std::invalid_argument);
  CHECK_THROWS_AS(component_of(chain, 3, {1, 2}), std::invalid_argument);
}

TEST_CASE("edge components partition acyclic graphs") {
  std::mt19937_64 rng(12);
  for (int round = 0; round < 20; ++round) {
    const Graph t = lcbp::testing::random_tree(9, rng);
    for (const auto& e : t.edges()) {
      const Subtree a = component_of(t, e.first, e);
      const Subtree b = component_of(t, e.second, e);
      CHECK(a.members.size() + b.members.size() == t.node_count());
      for (int v : a.members) CHECK(b.members.count(v) == 0);
    }
  }
}

TEST_CASE("cycle basis") {
  CHECK(find_cycles_basis(build_grid(1, 5)).empty());

  Graph square;
  square.add_edge(1, 2);
  square.add_edge(2, 3);
  square.add_edge(3, 4);
  square.add_edge(1, 4);
  const auto cycles = find_cycles_basis(square);
  REQUIRE(cycles.size() == 1);
  CHECK(cycles.front().size() == 4);

  CHECK(find_cycles_basis(build_grid(3, 3)).size() == 4);  // |E| - |V| + 1
}

TEST_CASE("remove nodes") {
  const Graph g = build_grid(3, 3);
  const Graph rest = remove_nodes(g, {4, 6, 8});
  CHECK(rest.node_count() == 6);
  CHECK(rest.edge_count() == 3);
  CHECK(is_acyclic(rest));
}
