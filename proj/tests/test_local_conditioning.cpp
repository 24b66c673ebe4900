#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "lcbp/local_conditioning.hpp"
#include "lcbp/numeric.hpp"
#include "test_support.hpp"

using namespace lcbp;
using lcbp::testing::golden_grid_ising;
using lcbp::testing::max_marginal_diff;

namespace {

struct Golden {
  Graph g = build_grid(3, 3);
  PotentialSet pots;
  AssociatedTree t;
  RelevantSets rs;

  Golden() {
    pots = golden_grid_ising(g);
    t = build_associated_tree(g, {{4, 6, 8}});
    rs = compute_relevant_sets(t);
  }
};

}  // namespace

TEST_CASE("relevant sets on the golden tree") {
  const Golden gold;
  const AssociatedTree& t = gold.t;
  const RelevantSets& rs = gold.rs;

  CHECK(rs.node_relevant.at(5) == std::vector<int>{4, 6, 8});
  CHECK(rs.edge_rel(t.copy_for_edge(4, 5), 5) == std::vector<int>{4});
  CHECK(rs.edge_rel(t.copy_for_edge(6, 5), 5) == std::vector<int>{6});
  CHECK(rs.edge_rel(t.copy_for_edge(8, 5), 5) == std::vector<int>{8});
  CHECK(rs.edge_rel(1, 2) == std::vector<int>{4, 8});
  CHECK(rs.edge_rel(5, 2) == std::vector<int>{4, 6, 8});
  CHECK(rs.edge_rel(2, 3) == std::vector<int>{6, 8});
  CHECK(rs.node_relevant.at(2) == std::vector<int>{4, 6, 8});

  // Sending 2 -> 3 sums out node 4; sending 2 -> 5 sums out nothing.
  CHECK(rs.summed_out.at({2, 3}) == std::vector<int>{4});
  CHECK(rs.summed_out.at({2, 5}).empty());
}

TEST_CASE("relevant set structure") {
  std::mt19937_64 rng(71);
  for (int round = 0; round < 30; ++round) {
    const Graph g = lcbp::testing::random_cyclic_graph(9, rng);
    const AssociatedTree t = build_associated_tree(g, find_loop_cutset(g));
    const RelevantSets rs = compute_relevant_sets(t);

    for (int v : t.tree.nodes()) {
      // The node's relevant set and the upstream sets of its neighbors
      // partition the whole cutset.
      std::vector<int> pieces = rs.node_relevant.at(v);
      std::size_t total = pieces.size();
      for (int w : t.tree.neighbors(v)) {
        const auto& up = rs.upstream.at({w, v});
        total += up.size();
        std::vector<int> overlap;
        std::set_intersection(pieces.begin(), pieces.end(), up.begin(), up.end(),
                              std::back_inserter(overlap));
        CHECK(overlap.empty());
        pieces.insert(pieces.end(), up.begin(), up.end());
      }
      std::sort(pieces.begin(), pieces.end());
      pieces.erase(std::unique(pieces.begin(), pieces.end()), pieces.end());
      CHECK(pieces == t.cutset);
      CHECK(total == t.cutset.size());

      for (int w : t.tree.neighbors(v)) {
        const auto& rel = rs.edge_rel(v, w);
        CHECK(std::includes(rs.node_relevant.at(v).begin(),
                            rs.node_relevant.at(v).end(), rel.begin(), rel.end()));
        // Upstream sets of the two directions never meet.
        const auto& a = rs.upstream.at({v, w});
        const auto& b = rs.upstream.at({w, v});
        std::vector<int> overlap;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                              std::back_inserter(overlap));
        CHECK(overlap.empty());
        CHECK(a.size() + b.size() + rel.size() == t.cutset.size());
      }
    }
  }
}

TEST_CASE("empty cutset leaves nothing relevant") {
  const Graph g = build_grid(1, 5);
  const AssociatedTree t = build_associated_tree(g, {{}});
  const RelevantSets rs = compute_relevant_sets(t);
  for (const auto& [v, rel] : rs.node_relevant) CHECK(rel.empty());
  for (const auto& [e, rel] : rs.edge_relevant) CHECK(rel.empty());
}

TEST_CASE("message columns shrink to the edge relevant set") {
  const Golden gold;
  const auto run = run_local_conditioning(gold.g, gold.pots, gold.t, true);

  std::map<DirectedEdge, const MessageMatrix*> by_edge;
  for (const auto& m : run.message_dump) by_edge[{m.from, m.to}] = &m;

  CHECK(by_edge.at({2, 3})->cols() == 4);
  CHECK(by_edge.at({2, 3})->conditioning.nodes == std::vector<int>{6, 8});
  CHECK(by_edge.at({5, 2})->cols() == 8);
  CHECK(by_edge.at({gold.t.copy_for_edge(4, 5), 5})->cols() == 2);

  CHECK(run.report.edge_columns.at(make_edge(2, 5)) == 8);
  CHECK(run.report.edge_columns.at(make_edge(4, 5)) == 2);
  CHECK(run.report.edge_columns.at(make_edge(5, 6)) == 2);
  CHECK(run.report.edge_columns.at(make_edge(5, 8)) == 2);
  CHECK(run.report.max_node_relevant == 3);
  CHECK(run.report.multiplies > 0);
}

TEST_CASE("golden grid matches the oracle") {
  const Golden gold;
  const auto run = run_local_conditioning(gold.g, gold.pots, gold.t);
  const auto oracle = brute_force_all(gold.g, gold.pots);
  for (int n : gold.g.nodes()) {
    CHECK(max_marginal_diff(marginal(oracle.at(n)), run.marginals.at(n)) < 1e-10);
  }
}

TEST_CASE("leaf copy messages follow the conditioned potential") {
  const Golden gold;
  const SplitPotentials splits = split_self_potentials(gold.pots, gold.t);
  const int sender = gold.t.copy_for_edge(8, 7);
  const MessageMatrix m =
      lc_message(gold.t, splits, gold.pots, gold.rs, sender, 7, {});
  REQUIRE(m.conditioning.nodes == std::vector<int>{8});
  REQUIRE(m.cols() == 2);

  // Column x: edge potential applied to the potential restricted to x.
  const auto em = gold.pots.edge_matrix(8, 7);
  std::vector<double> raw(4);
  for (int x = 0; x < 2; ++x) {
    const auto phi = condition_split_potential(splits.phi.at(sender), x);
    propagate(em, phi, std::span<double>(raw.data() + 2 * x, 2));
  }
  const double scale = lcbp::max_entry(raw);
  for (std::size_t c = 0; c < 2; ++c) {
    for (int r = 0; r < 2; ++r) {
      CHECK(m.at(r, c) == doctest::Approx(raw[c * 2 + r] / scale).epsilon(1e-15));
    }
  }
}

TEST_CASE("empty cutset reduces to plain bp bit for bit") {
  std::mt19937_64 rng(72);
  const Graph t = lcbp::testing::random_tree(10, rng);
  const PotentialSet pots = lcbp::testing::random_ising(t, rng);
  const AssociatedTree at = build_associated_tree(t, {{}});

  const auto plain = run_tree_bp(t, pots);
  const auto lc = run_local_conditioning(t, pots, at);
  for (int n : t.nodes()) {
    CHECK(lc.beliefs.at(n).values == plain.at(n).values);
    CHECK(lc.beliefs.at(n).log_scale == plain.at(n).log_scale);
  }
  CHECK(lc.report.max_node_relevant == 0);
}

TEST_CASE("local and global conditioning agree") {
  const Golden gold;
  const auto local = run_local_conditioning(gold.g, gold.pots, gold.t);
  const auto global = run_conditioning(gold.g, gold.pots, gold.t);
  for (int n : gold.g.nodes()) {
    CHECK(max_marginal_diff(local.marginals.at(n), global.marginals.at(n)) < 1e-12);
  }
}

TEST_CASE("random cyclic corpus matches the oracle") {
  std::mt19937_64 rng(73);
  for (int round = 0; round < 30; ++round) {
    std::uniform_int_distribution<int> size(4, 9);
    const Graph g = lcbp::testing::random_cyclic_graph(size(rng), rng);
    const PotentialSet pots = lcbp::testing::random_ising(g, rng);
    const AssociatedTree t = build_associated_tree(g, find_loop_cutset(g));
    const auto run = run_local_conditioning(g, pots, t);
    const auto oracle = brute_force_all(g, pots);
    for (int n : g.nodes()) {
      CHECK(max_marginal_diff(marginal(oracle.at(n)), run.marginals.at(n)) < 1e-10);
    }
  }
}

TEST_CASE("isolated node belief") {
  Graph single;
  single.add_node(2);
  PotentialSet pots;
  pots.alphabet_size = 2;
  pots.phi = {{2, {0.3, 0.7}}};
  const AssociatedTree t = build_associated_tree(single, {{}});
  const auto run = run_local_conditioning(single, pots, t);
  CHECK(run.beliefs.at(2).values == std::vector<double>{0.3, 0.7});
}

TEST_CASE("mismatched incoming conditioning is rejected") {
  const Golden gold;
  const SplitPotentials splits = split_self_potentials(gold.pots, gold.t);
  MatrixStore store;
  MessageMatrix wrong;
  wrong.from = 1;
  wrong.to = 2;
  wrong.conditioning = ColumnOrdering{{6}, 2};  // expected {4, 8}
  wrong.rows = 2;
  wrong.values = {1.0, 1.0, 1.0, 1.0};
  store[{1, 2}] = wrong;
  store[{5, 2}] = wrong;
  CHECK_THROWS_AS(lc_message(gold.t, splits, gold.pots, gold.rs, 2, 3, store),
                  std::invalid_argument);
  CHECK_THROWS_AS(lc_message(gold.t, splits, gold.pots, gold.rs, 2, 3, {}),
                  std::invalid_argument);
}
