#include "lcbp/tree_bp.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <string>

#include "lcbp/numeric.hpp"

namespace lcbp {

Schedule make_schedule(const Graph& tree, int root) {
  if (!tree.has_node(root)) {
    throw std::invalid_argument("schedule: unknown root " + std::to_string(root));
  }
  if (!tree.connected()) {
    throw std::invalid_argument("schedule: graph must be connected");
  }
  if (!is_acyclic(tree)) {
    throw std::invalid_argument("schedule: graph has a cycle");
  }

  std::map<int, int> parent{{root, root}};
  std::map<int, int> depth{{root, 0}};
  std::deque<int> frontier{root};
  while (!frontier.empty()) {
    int v = frontier.front();
    frontier.pop_front();
    for (int w : tree.neighbors(v)) {
      if (parent.count(w)) continue;
      parent[w] = v;
      depth[w] = depth[v] + 1;
      frontier.push_back(w);
    }
  }

  std::vector<int> order = tree.nodes();
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return depth[a] != depth[b] ? depth[a] > depth[b] : a < b;
  });

  Schedule s;
  for (int v : order) {
    if (v != root) s.order.emplace_back(v, parent[v]);
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    for (int w : tree.neighbors(*it)) {
      if (parent[w] == *it && w != *it) s.order.emplace_back(*it, w);
    }
  }
  return s;
}

MessageVector bp_message(const Graph& tree, const PotentialSet& pots, int j, int i,
                         const MessageStore& store, bool rescale) {
  if (!tree.has_edge(j, i)) {
    throw std::invalid_argument("bp_message: " + std::to_string(j) + "->" +
                                std::to_string(i) + " is not an edge");
  }
  std::vector<double> fused = pots.phi.at(j);
  double log_scale = 0.0;
  for (int k : tree.neighbors(j)) {
    if (k == i) continue;
    auto it = store.find({k, j});
    if (it == store.end()) {
      throw std::invalid_argument("bp_message: missing incoming message " +
                                  std::to_string(k) + "->" + std::to_string(j));
    }
    fuse(fused, it->second.values);
    log_scale += it->second.log_scale;
  }

  MessageVector m;
  m.from = j;
  m.to = i;
  m.values.resize(fused.size());
  propagate(pots.edge_matrix(j, i), fused, m.values);
  if (rescale) log_scale += rescale_max(m.values);
  m.log_scale = log_scale;
  return m;
}

BeliefVector bp_belief(const Graph& tree, const PotentialSet& pots, int i,
                       const MessageStore& store) {
  BeliefVector z;
  z.node = i;
  z.values = pots.phi.at(i);
  for (int j : tree.neighbors(i)) {
    auto it = store.find({j, i});
    if (it == store.end()) {
      throw std::invalid_argument("bp_belief: missing incoming message " +
                                  std::to_string(j) + "->" + std::to_string(i));
    }
    fuse(z.values, it->second.values);
    z.log_scale += it->second.log_scale;
  }
  return z;
}

std::map<int, BeliefVector> run_tree_bp(const Graph& tree, const PotentialSet& pots,
                                        bool rescale) {
  pots.validate(tree);
  const std::vector<int> nodes = tree.nodes();
  if (nodes.empty()) return {};
  const Schedule schedule = make_schedule(tree, nodes.front());

  MessageStore store;
  for (const auto& [j, i] : schedule.order) {
    if (store.count({j, i})) {
      throw std::logic_error("tree bp: message recomputation within one run");
    }
    store[{j, i}] = bp_message(tree, pots, j, i, store, rescale);
  }

  std::map<int, BeliefVector> beliefs;
  for (int v : nodes) beliefs[v] = bp_belief(tree, pots, v, store);
  return beliefs;
}

}  // namespace lcbp
