#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lcbp/model.hpp"

namespace lcbp {

/// Node set whose removal leaves the graph acyclic, kept in ascending id
/// order (the globally agreed ordering of the set).
struct LoopCutset {
  std::vector<int> nodes;

  bool contains(int id) const;
};

bool verify_loop_cutset(const Graph& g, const std::vector<int>& cutset);

/// Greedy max-degree removal until acyclic, then minimalization by attempted
/// re-insertion. Valid but not necessarily minimum.
LoopCutset find_loop_cutset(const Graph& g);

/// Every other full column (2, 4, ...) of a rows x cols grid. Removing them
/// leaves the odd columns as disjoint paths.
LoopCutset grid_column_cutset(int rows, int cols);

/// Result of splitting every cutset node into one copy per neighbor. Copy
/// vertices get fresh ids above the original id range; the forest may be
/// disconnected.
struct OpenedNetwork {
  Graph forest;
  std::map<int, int> base_of;                   // every vertex -> original node
  std::map<int, std::vector<int>> copies_of;    // cutset node -> copy vertices
  std::map<int, std::vector<int>> attached_of;  // copy vertex -> original neighbors
  std::map<NodePair, NodePair> edge_map;        // original edge -> forest edge,
                                                // aligned (rep of min, rep of max)
};

OpenedNetwork open_network(const Graph& g, const LoopCutset& cutset);

/// Candidate re-identification of the copies of `cutset_node` attached to
/// neighbors j1 < j2. Policies permute the candidate list; candidates are
/// merged in list order whenever the two copies sit in distinct components.
struct MergeCandidate {
  int cutset_node = 0;
  int j1 = 0;
  int j2 = 0;
};

using MergePolicy = std::function<void(std::vector<MergeCandidate>&)>;

MergePolicy merge_policy(const std::string& name);
std::vector<std::string> merge_policy_names();

/// Connected acyclic re-identification of the opened network, plus the
/// leaf / non-leaf classification of each cutset node's neighbors.
struct AssociatedTree {
  Graph original;
  Graph tree;
  std::vector<int> cutset;
  std::map<int, int> base_of;
  std::map<int, std::vector<int>> copies_of;
  std::map<int, std::vector<int>> attached_of;
  std::map<NodePair, NodePair> edge_map;              // original edge -> tree edge
  std::map<int, std::vector<int>> leaf_neighbors;     // cutset node -> neighbors on leaf copies
  std::map<int, std::vector<int>> nonleaf_neighbors;  // cutset node -> neighbors on the merged copy

  bool is_copy(int vertex) const;
  int base(int vertex) const;
  int copy_for_edge(int cutset_node, int neighbor) const;
  int vertex_for(int node, NodePair original_edge) const;
  /// Tree vertex whose belief is read off as the node's belief: the node
  /// itself, the non-leaf copy, or else the copy at the lowest leaf neighbor.
  int belief_vertex(int node) const;
};

AssociatedTree build_associated_tree(const Graph& g, const LoopCutset& cutset,
                                     const MergePolicy& policy = merge_policy("canonical"));

/// Exponents dividing each cutset node's self potential across its copies:
/// equal exponents 1/k over the k final copies, so the element-wise product
/// of the split potentials recovers the original potential exactly.
struct SplitPotentials {
  std::map<int, double> exponent;          // copy vertex -> exponent
  std::map<int, std::vector<double>> phi;  // copy vertex -> split potential

  double exponent_for(const AssociatedTree& t, int cutset_node, int neighbor) const;
};

SplitPotentials split_self_potentials(const PotentialSet& pots, const AssociatedTree& t);

/// Keeps the entry at value x, zeroes the rest.
std::vector<double> condition_split_potential(const std::vector<double>& phi, int x);

}  // namespace lcbp
