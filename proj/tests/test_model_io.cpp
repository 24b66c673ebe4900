#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lcbp/model_io.hpp"

using namespace lcbp;

TEST_CASE("graph json round trip") {
  const Graph g = build_grid(2, 3);
  const Graph back = graph_from_json(graph_to_json(g));
  CHECK(back.nodes() == g.nodes());
  CHECK(back.edges() == g.edges());

  // Reversed endpoints are normalized on load.
  const Json j = {{"nodes", {1, 2, 3}}, {"edges", {{3, 1}, {2, 1}}}};
  const Graph h = graph_from_json(j);
  CHECK(h.has_edge(1, 3));
  CHECK(h.has_edge(1, 2));

  CHECK_THROWS_AS(graph_from_json(Json{{"nodes", {1}}}), std::runtime_error);
}

TEST_CASE("ising model json round trip") {
  const Graph g = build_grid(2, 2);
  IsingParams p;
  for (int n : g.nodes()) p.alpha[n] = 0.05 * n;
  for (const auto& e : g.edges()) p.theta[e] = -0.3;

  const Model m = model_from_json(ising_model_to_json(g, p));
  const PotentialSet expect = expand_ising(p, g);
  CHECK(m.potentials.phi == expect.phi);
  CHECK(m.potentials.psi == expect.psi);
}

TEST_CASE("explicit model json round trip") {
  Graph g;
  g.add_edge(1, 2);
  PotentialSet pots;
  pots.alphabet_size = 3;
  pots.phi = {{1, {0.5, 1.0, 1.5}}, {2, {2.0, 0.25, 0.75}}};
  pots.psi = {{{1, 2}, {1, 2, 3, 4, 5, 6, 7, 8, 9}}};

  const Model m = model_from_json(explicit_model_to_json(g, pots));
  CHECK(m.potentials.alphabet_size == 3);
  CHECK(m.potentials.phi == pots.phi);
  CHECK(m.potentials.psi == pots.psi);
}

TEST_CASE("model validation errors") {
  const Graph g = build_grid(1, 2);
  IsingParams p;
  p.alpha = {{1, 0.0}, {2, 0.0}};
  p.theta = {{{1, 2}, 0.0}};
  Json j = ising_model_to_json(g, p);

  Json both = j;
  both["phi"] = Json::object();
  CHECK_THROWS_AS(model_from_json(both), std::runtime_error);

  Json neither = j;
  neither.erase("ising");
  CHECK_THROWS_AS(model_from_json(neither), std::runtime_error);

  Json bad_alphabet = j;
  bad_alphabet["alphabet"] = 3;
  CHECK_THROWS_AS(model_from_json(bad_alphabet), std::runtime_error);

  Json bad_key = j;
  bad_key["ising"]["alpha"]["shrug"] = 0.1;
  CHECK_THROWS_AS(model_from_json(bad_key), std::runtime_error);
}

TEST_CASE("results json round trip") {
  RunResults r;
  r.method = "lc";
  r.marginals = {{1, {0.25, 0.75}}, {12, {0.5, 0.5}}};
  r.report = Json{{"max_node_relevant", 3}};
  const RunResults back = results_from_json(results_to_json(r));
  CHECK(back.method == r.method);
  CHECK(back.marginals == r.marginals);
  CHECK(back.report.at("max_node_relevant") == 3);
}

TEST_CASE("report and message dumps carry the schema keys") {
  ComplexityReport report;
  report.max_node_relevant = 2;
  report.edge_columns[{1, 2}] = 4;
  report.multiplies = 42;
  const Json j = report_to_json(report);
  CHECK(j.at("max_node_relevant") == 2);
  CHECK(j.at("edge_columns").at("1-2") == 4);
  CHECK(j.at("multiplies") == 42);

  WireMessage w;
  w.from = 2;
  w.to = 3;
  w.ordering = {6, 8};
  w.rows = 2;
  w.columns = 4;
  w.values.assign(8, 1.0);
  w.log_scale = 0.5;
  const Json dump = messages_to_json({w});
  CHECK(dump.at("messages").size() == 1);
  CHECK(dump.at("messages")[0].at("ordering") == Json({6, 8}));
  CHECK(dump.at("messages")[0].at("cols") == 4);
}
