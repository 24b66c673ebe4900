#include "lcbp/model_io.hpp"

#include <fstream>
#include <stdexcept>

namespace lcbp {

namespace {

std::string edge_key(NodePair e) {
  return std::to_string(e.first) + "-" + std::to_string(e.second);
}

int parse_node_key(const std::string& key) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(key, &used);
    if (used != key.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("model: bad node key '" + key + "'");
  }
}

NodePair parse_edge_key(const std::string& key) {
  const auto dash = key.find('-', 1);  // skip a possible leading minus sign
  if (dash == std::string::npos) {
    throw std::runtime_error("model: bad edge key '" + key + "'");
  }
  return make_edge(parse_node_key(key.substr(0, dash)),
                   parse_node_key(key.substr(dash + 1)));
}

}  // namespace

Json graph_to_json(const Graph& g) {
  Json j;
  j["nodes"] = g.nodes();
  auto& edges = j["edges"] = Json::array();
  for (const auto& [a, b] : g.edges()) edges.push_back({a, b});
  return j;
}

Graph graph_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("nodes") || !j.contains("edges")) {
    throw std::runtime_error("graph: expected an object with 'nodes' and 'edges'");
  }
  Graph g;
  for (const auto& n : j.at("nodes")) g.add_node(n.get<int>());
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2) {
      throw std::runtime_error("graph: each edge must be a pair of node ids");
    }
    g.add_edge(e[0].get<int>(), e[1].get<int>());
  }
  return g;
}

Model model_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("graph")) {
    throw std::runtime_error("model: expected an object with a 'graph'");
  }
  Model m;
  m.graph = graph_from_json(j.at("graph"));

  const bool has_ising = j.contains("ising");
  const bool has_explicit = j.contains("phi") || j.contains("psi");
  if (has_ising == has_explicit) {
    throw std::runtime_error("model: provide exactly one of 'ising' or 'phi'/'psi'");
  }

  if (has_ising) {
    if (j.contains("alphabet") && j.at("alphabet").get<int>() != 2) {
      throw std::runtime_error("model: ising models are binary");
    }
    IsingParams p;
    const Json& ising = j.at("ising");
    for (const auto& [key, value] : ising.at("alpha").items()) {
      p.alpha[parse_node_key(key)] = value.get<double>();
    }
    for (const auto& [key, value] : ising.at("theta").items()) {
      p.theta[parse_edge_key(key)] = value.get<double>();
    }
    m.potentials = expand_ising(p, m.graph);
    return m;
  }

  if (!j.contains("phi") || !j.contains("psi") || !j.contains("alphabet")) {
    throw std::runtime_error("model: explicit models need 'alphabet', 'phi' and 'psi'");
  }
  m.potentials.alphabet_size = j.at("alphabet").get<int>();
  const std::size_t q = static_cast<std::size_t>(m.potentials.alphabet_size);
  for (const auto& [key, value] : j.at("phi").items()) {
    m.potentials.phi[parse_node_key(key)] = value.get<std::vector<double>>();
  }
  for (const auto& [key, value] : j.at("psi").items()) {
    const auto rows = value.get<std::vector<std::vector<double>>>();
    if (rows.size() != q) {
      throw std::runtime_error("model: edge potential '" + key + "' has wrong shape");
    }
    std::vector<double> flat;
    flat.reserve(q * q);
    for (const auto& row : rows) {
      if (row.size() != q) {
        throw std::runtime_error("model: edge potential '" + key + "' has wrong shape");
      }
      flat.insert(flat.end(), row.begin(), row.end());
    }
    m.potentials.psi[parse_edge_key(key)] = std::move(flat);
  }
  m.potentials.validate(m.graph);
  return m;
}

Model load_model(const std::string& path) { return model_from_json(load_json(path)); }

Json ising_model_to_json(const Graph& g, const IsingParams& p) {
  Json j;
  j["alphabet"] = 2;
  j["graph"] = graph_to_json(g);
  Json alpha = Json::object();
  for (const auto& [n, a] : p.alpha) alpha[std::to_string(n)] = a;
  Json theta = Json::object();
  for (const auto& [e, t] : p.theta) theta[edge_key(e)] = t;
  j["ising"] = {{"alpha", std::move(alpha)}, {"theta", std::move(theta)}};
  return j;
}

Json explicit_model_to_json(const Graph& g, const PotentialSet& pots) {
  Json j;
  j["alphabet"] = pots.alphabet_size;
  j["graph"] = graph_to_json(g);
  Json phi = Json::object();
  for (const auto& [n, v] : pots.phi) phi[std::to_string(n)] = v;
  Json psi = Json::object();
  const std::size_t q = static_cast<std::size_t>(pots.alphabet_size);
  for (const auto& [e, flat] : pots.psi) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < q; ++r) {
      rows.push_back(std::vector<double>(flat.begin() + r * q, flat.begin() + (r + 1) * q));
    }
    psi[edge_key(e)] = std::move(rows);
  }
  j["phi"] = std::move(phi);
  j["psi"] = std::move(psi);
  return j;
}

Json results_to_json(const RunResults& r) {
  Json j;
  j["method"] = r.method;
  Json marginals = Json::object();
  for (const auto& [n, p] : r.marginals) marginals[std::to_string(n)] = p;
  j["marginals"] = std::move(marginals);
  j["report"] = r.report;
  return j;
}

RunResults results_from_json(const Json& j) {
  RunResults r;
  r.method = j.at("method").get<std::string>();
  for (const auto& [key, value] : j.at("marginals").items()) {
    r.marginals[parse_node_key(key)] = value.get<std::vector<double>>();
  }
  r.report = j.value("report", Json());
  return r;
}

Json report_to_json(const ComplexityReport& report) {
  Json j;
  j["max_node_relevant"] = report.max_node_relevant;
  Json cols = Json::object();
  for (const auto& [e, c] : report.edge_columns) cols[edge_key(e)] = c;
  j["edge_columns"] = std::move(cols);
  j["multiplies"] = report.multiplies;
  return j;
}

Json messages_to_json(const std::vector<WireMessage>& messages) {
  Json list = Json::array();
  for (const auto& w : messages) {
    list.push_back({{"from", w.from},
                    {"to", w.to},
                    {"ordering", w.ordering},
                    {"rows", w.rows},
                    {"cols", w.columns},
                    {"values", w.values},
                    {"log_scale", w.log_scale}});
  }
  return Json{{"messages", std::move(list)}};
}

Json explain_to_json(const AssociatedTree& t, const RelevantSets& rs,
                     const ComplexityReport& report) {
  Json j;
  j["cutset"] = t.cutset;

  Json copies = Json::array();
  for (const auto& [l, list] : t.copies_of) {
    for (int c : list) {
      copies.push_back({{"vertex", c}, {"base", l}, {"attached", t.attached_of.at(c)}});
    }
  }
  j["copies"] = std::move(copies);

  Json tree_edges = Json::array();
  for (const auto& [a, b] : t.tree.edges()) tree_edges.push_back({a, b});
  j["tree_edges"] = std::move(tree_edges);

  Json leaf = Json::object(), nonleaf = Json::object();
  for (const auto& [l, v] : t.leaf_neighbors) leaf[std::to_string(l)] = v;
  for (const auto& [l, v] : t.nonleaf_neighbors) nonleaf[std::to_string(l)] = v;
  j["leaf_neighbors"] = std::move(leaf);
  j["nonleaf_neighbors"] = std::move(nonleaf);

  Json edge_rel = Json::object();
  for (const auto& [orig, te] : t.edge_map) {
    edge_rel[edge_key(orig)] = rs.edge_rel(te.first, te.second);
  }
  j["edge_relevant"] = std::move(edge_rel);

  Json node_rel = Json::object();
  for (const auto& [v, rel] : rs.node_relevant) node_rel[std::to_string(v)] = rel;
  j["node_relevant"] = std::move(node_rel);

  j["report"] = report_to_json(report);
  return j;
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw std::runtime_error("cannot parse '" + path + "': " + e.what());
  }
  return j;
}

void save_json(const Json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

}  // namespace lcbp
