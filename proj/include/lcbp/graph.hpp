#pragma once

#include <map>
#include <set>
#include <utility>
#include <vector>

namespace lcbp {

using NodePair = std::pair<int, int>;

inline NodePair make_edge(int i, int j) {
  return i < j ? NodePair{i, j} : NodePair{j, i};
}

/// Undirected simple graph over integer node ids. Neighbor lists are kept
/// sorted ascending and adjacency stays symmetric under every mutation.
class Graph {
 public:
  void add_node(int id);
  void add_edge(int i, int j);

  bool has_node(int id) const { return adj_.count(id) != 0; }
  bool has_edge(int i, int j) const { return edges_.count(make_edge(i, j)) != 0; }

  const std::vector<int>& neighbors(int id) const;
  int degree(int id) const { return static_cast<int>(neighbors(id).size()); }

  std::vector<int> nodes() const;
  const std::set<NodePair>& edges() const { return edges_; }
  std::size_t node_count() const { return adj_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  bool connected() const;

 private:
  std::map<int, std::vector<int>> adj_;
  std::set<NodePair> edges_;
};

/// rows x cols grid, nodes numbered row-major starting at 1.
Graph build_grid(int rows, int cols);

bool is_acyclic(const Graph& g);

/// Connected component of g minus one edge, taken from the endpoint `root`.
struct Subtree {
  int root = 0;
  int excluded = 0;
  std::set<int> members;
};

Subtree component_of(const Graph& g, int i, NodePair edge);

/// Fundamental cycles of a spanning forest; empty iff the graph is acyclic.
std::vector<std::vector<int>> find_cycles_basis(const Graph& g);

Graph remove_nodes(const Graph& g, const std::set<int>& drop);

}  // namespace lcbp
