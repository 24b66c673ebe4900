#include "lcbp/graph.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <string>

namespace lcbp {

void Graph::add_node(int id) { adj_.try_emplace(id); }

void Graph::add_edge(int i, int j) {
  if (i == j) {
    throw std::invalid_argument("graph: self-loop on node " + std::to_string(i));
  }
  add_node(i);
  add_node(j);
  if (!edges_.insert(make_edge(i, j)).second) {
    return;  // edge already present
  }
  auto& ni = adj_[i];
  ni.insert(std::lower_bound(ni.begin(), ni.end(), j), j);
  auto& nj = adj_[j];
  nj.insert(std::lower_bound(nj.begin(), nj.end(), i), i);
}

const std::vector<int>& Graph::neighbors(int id) const {
  auto it = adj_.find(id);
  if (it == adj_.end()) {
    throw std::out_of_range("graph: unknown node " + std::to_string(id));
  }
  return it->second;
}

std::vector<int> Graph::nodes() const {
  std::vector<int> out;
  out.reserve(adj_.size());
  for (const auto& [id, nbrs] : adj_) out.push_back(id);
  return out;
}

bool Graph::connected() const {
  if (adj_.empty()) return true;
  std::set<int> seen;
  std::deque<int> frontier{adj_.begin()->first};
  seen.insert(adj_.begin()->first);
  while (!frontier.empty()) {
    int v = frontier.front();
    frontier.pop_front();
    for (int w : neighbors(v)) {
      if (seen.insert(w).second) frontier.push_back(w);
    }
  }
  return seen.size() == adj_.size();
}

Graph build_grid(int rows, int cols) {
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("build_grid: rows and cols must be positive");
  }
  Graph g;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int id = r * cols + c + 1;
      g.add_node(id);
      if (c + 1 < cols) g.add_edge(id, id + 1);
      if (r + 1 < rows) g.add_edge(id, id + cols);
    }
  }
  return g;
}

namespace {

// Union-find over sparse node ids.
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

  // Returns false when x and y were already in the same set.
  bool unite(int x, int y) {
    int rx = find(x), ry = find(y);
    if (rx == ry) return false;
    parent_[std::max(rx, ry)] = std::min(rx, ry);
    return true;
  }

 private:
  std::map<int, int> parent_;
};

}  // namespace

bool is_acyclic(const Graph& g) {
  DisjointSet ds;
  for (const auto& [a, b] : g.edges()) {
    if (!ds.unite(a, b)) return false;
  }
  return true;
}

Subtree component_of(const Graph& g, int i, NodePair edge) {
  const auto e = make_edge(edge.first, edge.second);
  if (!g.has_edge(e.first, e.second)) {
    throw std::invalid_argument("component_of: edge not present in graph");
  }
  if (i != e.first && i != e.second) {
    throw std::invalid_argument("component_of: node is not an endpoint of the edge");
  }
  const int j = (i == e.first) ? e.second : e.first;
  Subtree out;
  out.root = i;
  out.excluded = j;
  std::deque<int> frontier{i};
  out.members.insert(i);
  while (!frontier.empty()) {
    int v = frontier.front();
    frontier.pop_front();
    for (int w : g.neighbors(v)) {
      if (v == i && w == j) continue;  // the removed edge
      if (v == j && w == i) continue;
      if (out.members.insert(w).second) frontier.push_back(w);
    }
  }
  return out;
}

std::vector<std::vector<int>> find_cycles_basis(const Graph& g) {
  std::map<int, int> parent;
  std::map<int, int> depth;
  std::set<NodePair> tree_edges;

  for (int root : g.nodes()) {
    if (parent.count(root)) continue;
    parent[root] = root;
    depth[root] = 0;
    std::deque<int> frontier{root};
    while (!frontier.empty()) {
      int v = frontier.front();
      frontier.pop_front();
      for (int w : g.neighbors(v)) {
        if (parent.count(w)) continue;
        parent[w] = v;
        depth[w] = depth[v] + 1;
        tree_edges.insert(make_edge(v, w));
        frontier.push_back(w);
      }
    }
  }

  std::vector<std::vector<int>> cycles;
  for (const auto& e : g.edges()) {
    if (tree_edges.count(e)) continue;
    // Non-tree edge {u,v}: the cycle is u..lca..v along parent links.
    int u = e.first, v = e.second;
    std::vector<int> up_u{u}, up_v{v};
    while (depth[u] > depth[v]) up_u.push_back(u = parent[u]);
    while (depth[v] > depth[u]) up_v.push_back(v = parent[v]);
    while (u != v) {
      up_u.push_back(u = parent[u]);
      up_v.push_back(v = parent[v]);
    }
    std::vector<int> cycle(up_u.begin(), up_u.end());
    cycle.insert(cycle.end(), up_v.rbegin() + 1, up_v.rend());
    cycles.push_back(std::move(cycle));
  }
  return cycles;
}

Graph remove_nodes(const Graph& g, const std::set<int>& drop) {
  Graph out;
  for (int v : g.nodes()) {
    if (!drop.count(v)) out.add_node(v);
  }
  for (const auto& [a, b] : g.edges()) {
    if (!drop.count(a) && !drop.count(b)) out.add_edge(a, b);
  }
  return out;
}

}  // namespace lcbp
