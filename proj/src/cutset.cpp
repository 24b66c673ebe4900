#include "lcbp/cutset.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace lcbp {

namespace {

std::string edge_name(NodePair e) {
  return std::to_string(e.first) + "-" + std::to_string(e.second);
}

class DisjointSet {
 public:
  int find(int x) {
    auto it = parent_.find(x);
    if (it == parent_.end()) {
      parent_[x] = x;
      return x;
    }
    int root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) {
      int next = parent_[x];
      parent_[x] = root;
      x = next;
    }
    return root;
  }

  void unite(int x, int y) {
    int rx = find(x), ry = find(y);
    if (rx != ry) parent_[std::max(rx, ry)] = std::min(rx, ry);
  }

 private:
  std::map<int, int> parent_;
};

}  // namespace

bool LoopCutset::contains(int id) const {
  return std::binary_search(nodes.begin(), nodes.end(), id);
}

bool verify_loop_cutset(const Graph& g, const std::vector<int>& cutset) {
  std::set<int> drop;
  for (int v : cutset) {
    if (!g.has_node(v)) {
      throw std::invalid_argument("cutset: unknown node " + std::to_string(v));
    }
    drop.insert(v);
  }
  return is_acyclic(remove_nodes(g, drop));
}

LoopCutset find_loop_cutset(const Graph& g) {
  std::set<int> chosen;
  Graph residual = g;
  while (!is_acyclic(residual)) {
    int best = 0;
    int best_degree = -1;
    for (int v : residual.nodes()) {
      if (residual.degree(v) > best_degree) {
        best = v;
        best_degree = residual.degree(v);
      }
    }
    chosen.insert(best);
    residual = remove_nodes(residual, {best});
  }
  // Drop any member whose removal set stays acyclic without it.
  for (auto it = chosen.begin(); it != chosen.end();) {
    std::set<int> trial = chosen;
    trial.erase(*it);
    if (is_acyclic(remove_nodes(g, trial))) {
      it = chosen.erase(it);
    } else {
      ++it;
    }
  }
  return {std::vector<int>(chosen.begin(), chosen.end())};
}

LoopCutset grid_column_cutset(int rows, int cols) {
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("grid cutset: rows and cols must be positive");
  }
  LoopCutset out;
  for (int c = 2; c <= cols; c += 2) {
    for (int r = 0; r < rows; ++r) out.nodes.push_back(r * cols + c);
  }
  std::sort(out.nodes.begin(), out.nodes.end());
  return out;
}

OpenedNetwork open_network(const Graph& g, const LoopCutset& raw) {
  LoopCutset cutset = raw;
  std::sort(cutset.nodes.begin(), cutset.nodes.end());
  cutset.nodes.erase(std::unique(cutset.nodes.begin(), cutset.nodes.end()),
                     cutset.nodes.end());
  if (!verify_loop_cutset(g, cutset.nodes)) {
    throw std::invalid_argument("open_network: node set is not a loop cutset");
  }
  OpenedNetwork out;
  for (int v : g.nodes()) {
    if (!cutset.contains(v)) {
      out.base_of[v] = v;
      out.forest.add_node(v);
    }
  }

  int next_id = g.nodes().empty() ? 1 : g.nodes().back() + 1;
  std::map<NodePair, int> copy_at;  // (cutset node, neighbor) -> copy vertex
  for (int l : cutset.nodes) {
    for (int j : g.neighbors(l)) {
      const int c = next_id++;
      copy_at[{l, j}] = c;
      out.base_of[c] = l;
      out.copies_of[l].push_back(c);
      out.attached_of[c] = {j};
      out.forest.add_node(c);
    }
  }

  for (const auto& e : g.edges()) {
    const int ra = cutset.contains(e.first) ? copy_at[{e.first, e.second}] : e.first;
    const int rb = cutset.contains(e.second) ? copy_at[{e.second, e.first}] : e.second;
    out.forest.add_edge(ra, rb);
    out.edge_map[e] = {ra, rb};
  }
  return out;
}

MergePolicy merge_policy(const std::string& name) {
  if (name == "canonical") {
    return [](std::vector<MergeCandidate>&) {};  // generation order is canonical
  }
  if (name == "reverse") {
    return [](std::vector<MergeCandidate>& c) { std::reverse(c.begin(), c.end()); };
  }
  if (name == "narrow-span") {
    return [](std::vector<MergeCandidate>& c) {
      std::stable_sort(c.begin(), c.end(), [](const MergeCandidate& a, const MergeCandidate& b) {
        return a.j2 - a.j1 < b.j2 - b.j1;
      });
    };
  }
  if (name == "wide-span") {
    return [](std::vector<MergeCandidate>& c) {
      std::stable_sort(c.begin(), c.end(), [](const MergeCandidate& a, const MergeCandidate& b) {
        return a.j2 - a.j1 > b.j2 - b.j1;
      });
    };
  }
  throw std::invalid_argument("unknown merge policy '" + name + "'");
}

std::vector<std::string> merge_policy_names() {
  return {"canonical", "reverse", "narrow-span", "wide-span"};
}

bool AssociatedTree::is_copy(int vertex) const { return base_of.at(vertex) != vertex; }

int AssociatedTree::base(int vertex) const { return base_of.at(vertex); }

int AssociatedTree::copy_for_edge(int cutset_node, int neighbor) const {
  return vertex_for(cutset_node, make_edge(cutset_node, neighbor));
}

int AssociatedTree::vertex_for(int node, NodePair original_edge) const {
  const auto e = make_edge(original_edge.first, original_edge.second);
  auto it = edge_map.find(e);
  if (it == edge_map.end()) {
    throw std::invalid_argument("associated tree: unknown edge " + edge_name(e));
  }
  if (node == e.first) return it->second.first;
  if (node == e.second) return it->second.second;
  throw std::invalid_argument("associated tree: node " + std::to_string(node) +
                              " is not an endpoint of " + edge_name(e));
}

int AssociatedTree::belief_vertex(int node) const {
  auto copies = copies_of.find(node);
  if (copies == copies_of.end()) return node;
  const auto& nl = nonleaf_neighbors.at(node);
  if (!nl.empty()) {
    for (int c : copies->second) {
      if (attached_of.at(c).size() > 1) return c;
    }
  }
  return copy_for_edge(node, leaf_neighbors.at(node).front());
}

AssociatedTree build_associated_tree(const Graph& g, const LoopCutset& raw,
                                     const MergePolicy& policy) {
  if (!g.connected()) {
    throw std::invalid_argument("build_associated_tree: graph must be connected");
  }
  LoopCutset cutset = raw;
  std::sort(cutset.nodes.begin(), cutset.nodes.end());
  cutset.nodes.erase(std::unique(cutset.nodes.begin(), cutset.nodes.end()),
                     cutset.nodes.end());
  OpenedNetwork opened = open_network(g, cutset);

  std::map<NodePair, int> copy_at;  // (cutset node, neighbor) -> provisional copy
  for (const auto& [l, copies] : opened.copies_of) {
    for (int c : copies) copy_at[{l, opened.attached_of[c].front()}] = c;
  }

  std::vector<MergeCandidate> candidates;
  for (int l : cutset.nodes) {
    const auto& nbrs = g.neighbors(l);
    for (std::size_t a = 0; a < nbrs.size(); ++a) {
      for (std::size_t b = a + 1; b < nbrs.size(); ++b) {
        candidates.push_back({l, nbrs[a], nbrs[b]});
      }
    }
  }
  policy(candidates);

  DisjointSet merged;     // copy re-identification classes, min id representative
  DisjointSet component;  // components of the forest under the merges so far
  for (const auto& e : opened.forest.edges()) component.unite(e.first, e.second);

  for (const auto& cand : candidates) {
    const int ca = merged.find(copy_at.at({cand.cutset_node, cand.j1}));
    const int cb = merged.find(copy_at.at({cand.cutset_node, cand.j2}));
    if (ca == cb) continue;
    if (component.find(ca) == component.find(cb)) continue;  // would close a cycle
    merged.unite(ca, cb);
    component.unite(ca, cb);
  }

  AssociatedTree t;
  t.original = g;
  t.cutset = cutset.nodes;

  for (const auto& [v, b] : opened.base_of) {
    const int rep = (v == b) ? v : merged.find(v);
    t.base_of.emplace(rep, b);
  }
  for (const auto& [l, copies] : opened.copies_of) {
    std::set<int> reps;
    for (int c : copies) reps.insert(merged.find(c));
    t.copies_of[l].assign(reps.begin(), reps.end());
    for (int c : copies) {
      auto& att = t.attached_of[merged.find(c)];
      att.insert(std::lower_bound(att.begin(), att.end(), opened.attached_of[c].front()),
                 opened.attached_of[c].front());
    }
  }

  for (const auto& [v, b] : t.base_of) t.tree.add_node(v);
  for (const auto& [orig, forest_edge] : opened.edge_map) {
    auto rep = [&](int v) { return opened.base_of.at(v) == v ? v : merged.find(v); };
    const NodePair te{rep(forest_edge.first), rep(forest_edge.second)};
    t.tree.add_edge(te.first, te.second);
    t.edge_map[orig] = te;
  }

  if (!t.tree.connected() || !is_acyclic(t.tree)) {
    throw std::logic_error("build_associated_tree: re-identification failed");
  }

  for (int l : cutset.nodes) {
    auto& leaf = t.leaf_neighbors[l];
    auto& nonleaf = t.nonleaf_neighbors[l];
    for (int c : t.copies_of[l]) {
      const auto& att = t.attached_of[c];
      if (att.size() == 1) {
        leaf.push_back(att.front());
      } else {
        if (!nonleaf.empty()) {
          throw std::logic_error("build_associated_tree: two merged copies of node " +
                                 std::to_string(l));
        }
        nonleaf = att;
      }
    }
    std::sort(leaf.begin(), leaf.end());
  }
  return t;
}

double SplitPotentials::exponent_for(const AssociatedTree& t, int cutset_node,
                                     int neighbor) const {
  return exponent.at(t.copy_for_edge(cutset_node, neighbor));
}

SplitPotentials split_self_potentials(const PotentialSet& pots, const AssociatedTree& t) {
  SplitPotentials out;
  for (const auto& [l, copies] : t.copies_of) {
    const double a = 1.0 / static_cast<double>(copies.size());
    const auto& phi = pots.phi.at(l);
    for (int c : copies) {
      out.exponent[c] = a;
      auto& split = out.phi[c];
      split.resize(phi.size());
      for (std::size_t k = 0; k < phi.size(); ++k) split[k] = std::pow(phi[k], a);
    }
  }
  return out;
}

std::vector<double> condition_split_potential(const std::vector<double>& phi, int x) {
  if (x < 0 || static_cast<std::size_t>(x) >= phi.size()) {
    throw std::invalid_argument("condition: value outside the alphabet");
  }
  std::vector<double> out(phi.size(), 0.0);
  out[x] = phi[x];
  return out;
}

}  // namespace lcbp
