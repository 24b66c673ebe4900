#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lcbp/model.hpp"
#include "test_support.hpp"

using namespace lcbp;
using lcbp::testing::golden_grid_ising;

TEST_CASE("ising expansion") {
  Graph g;
  g.add_edge(1, 2);

  IsingParams zero;
  zero.alpha = {{1, 0.0}, {2, 0.0}};
  zero.theta = {{{1, 2}, 0.0}};
  const PotentialSet flat = expand_ising(zero, g);
  CHECK(flat.phi.at(1) == std::vector<double>{1.0, 1.0});
  CHECK(flat.psi.at({1, 2}) == std::vector<double>{1.0, 1.0, 1.0, 1.0});

  IsingParams p;
  p.alpha = {{1, 0.3}, {2, 0.0}};
  p.theta = {{{1, 2}, 1.0}};
  const PotentialSet pots = expand_ising(p, g);
  const double e = std::exp(1.0);
  CHECK(pots.psi.at({1, 2}) == std::vector<double>{e, 1.0 / e, 1.0 / e, e});
  CHECK(pots.phi.at(1)[0] == doctest::Approx(std::exp(0.3)).epsilon(1e-15));
  CHECK(pots.phi.at(1)[1] == doctest::Approx(std::exp(-0.3)).epsilon(1e-15));

  IsingParams incomplete;
  incomplete.alpha = {{1, 0.1}};
  incomplete.theta = {{{1, 2}, 0.5}};
  CHECK_THROWS_AS(expand_ising(incomplete, g), std::invalid_argument);
}

TEST_CASE("edge potential orientation round trips") {
  Graph g;
  g.add_edge(1, 2);
  PotentialSet pots;
  pots.alphabet_size = 2;
  pots.phi = {{1, {1.0, 1.0}}, {2, {1.0, 1.0}}};
  pots.psi = {{{1, 2}, {1.0, 2.0, 3.0, 4.0}}};
  CHECK(pots.psi_value(1, 2, 0, 1) == 2.0);
  CHECK(pots.psi_value(2, 1, 1, 0) == 2.0);  // transpose view

  const auto m12 = pots.edge_matrix(1, 2);  // rows indexed by x_2
  CHECK(m12 == std::vector<double>{1.0, 3.0, 2.0, 4.0});
  const auto m21 = pots.edge_matrix(2, 1);
  CHECK(m21 == std::vector<double>{1.0, 2.0, 3.0, 4.0});
}

TEST_CASE("marginal normalization") {
  CHECK(marginal({1, {3.0, 1.0}, 0.0}) == std::vector<double>{0.75, 0.25});
  CHECK(marginal({1, {7.5, 7.5}, 2.0}) == std::vector<double>{0.5, 0.5});
  CHECK_THROWS_AS(marginal({1, {0.0, 0.0}, 0.0}), std::invalid_argument);
}

TEST_CASE("brute force on trivial graphs") {
  Graph pair;
  pair.add_edge(1, 2);
  IsingParams p;
  p.alpha = {{1, 0.0}, {2, 0.0}};
  p.theta = {{{1, 2}, 0.7}};
  const auto z = brute_force_belief(pair, expand_ising(p, pair), 1);
  const auto m = marginal(z);
  CHECK(m[0] == doctest::Approx(0.5).epsilon(1e-15));

  Graph single;
  single.add_node(4);
  PotentialSet pots;
  pots.alphabet_size = 2;
  pots.phi = {{4, {2.0, 6.0}}};
  const auto ms = marginal(brute_force_belief(single, pots, 4));
  CHECK(ms[0] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(ms[1] == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("brute force golden grid") {
  const Graph g = build_grid(3, 3);
  const PotentialSet pots = golden_grid_ising(g);

  // Expected values frozen from an independent enumeration.
  const auto m5 = marginal(brute_force_belief(g, pots, 5));
  CHECK(m5[0] == doctest::Approx(0.8708394093665678).epsilon(1e-12));
  CHECK(m5[1] == doctest::Approx(0.1291605906334322).epsilon(1e-12));
  const auto m1 = marginal(brute_force_belief(g, pots, 1));
  CHECK(m1[0] == doctest::Approx(0.6435936067747785).epsilon(1e-12));
  const auto m9 = marginal(brute_force_belief(g, pots, 9));
  CHECK(m9[0] == doctest::Approx(0.9150306043042891).epsilon(1e-12));

  // The partition function must come out identical from every node.
  const auto all = brute_force_all(g, pots);
  double z0 = 0.0;
  for (double v : all.at(1).values) z0 += v;
  for (const auto& [n, z] : all) {
    double zn = 0.0;
    for (double v : z.values) zn += v;
    CHECK(zn == doctest::Approx(z0).epsilon(1e-12));
  }
}

TEST_CASE("spin flip symmetry") {
  std::mt19937_64 rng(21);
  const Graph g = build_grid(2, 3);
  IsingParams p;
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  for (int v : g.nodes()) p.alpha[v] = 0.0;
  for (const auto& e : g.edges()) p.theta[e] = uniform(rng);
  const auto all = brute_force_all(g, expand_ising(p, g));
  for (const auto& [n, z] : all) {
    const auto m = marginal(z);
    CHECK(m[0] == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("brute force guards") {
  Graph disconnected;
  disconnected.add_node(1);
  disconnected.add_node(2);
  PotentialSet pots;
  pots.alphabet_size = 2;
  pots.phi = {{1, {1.0, 1.0}}, {2, {1.0, 1.0}}};
  CHECK_THROWS_AS(brute_force_belief(disconnected, pots, 1), std::invalid_argument);

  // 2^25 configurations trip the enumeration guard.
  const Graph big = build_grid(5, 5);
  Graph bigger = big;
  bigger.add_edge(25, 26);
  PotentialSet uniform;
  uniform.alphabet_size = 2;
  for (int v : bigger.nodes()) uniform.phi[v] = {1.0, 1.0};
  for (const auto& e : bigger.edges()) uniform.psi[e] = {1.0, 1.0, 1.0, 1.0};
  CHECK_THROWS_AS(brute_force_belief(bigger, uniform, 1), std::invalid_argument);
}

TEST_CASE("potential validation") {
  const Graph g = build_grid(1, 2);
  PotentialSet pots;
  pots.alphabet_size = 2;
  pots.phi = {{1, {1.0, 0.0}}, {2, {1.0, 1.0}}};  // zero entry
  pots.psi = {{{1, 2}, {1.0, 1.0, 1.0, 1.0}}};
  CHECK_THROWS_AS(pots.validate(g), std::invalid_argument);
  pots.phi[1] = {1.0, 2.0};
  CHECK_NOTHROW(pots.validate(g));
  pots.psi.erase({1, 2});
  CHECK_THROWS_AS(pots.validate(g), std::invalid_argument);
}
