#pragma once

#include <map>
#include <vector>

#include "lcbp/model.hpp"

namespace lcbp {

/// One sum-product message over a directed edge of an acyclic network,
/// rescaled so its max entry is 1 with the factor tracked in log_scale.
struct MessageVector {
  int from = 0;
  int to = 0;
  std::vector<double> values;
  double log_scale = 0.0;
};

using DirectedEdge = std::pair<int, int>;  // (from, to)
using MessageStore = std::map<DirectedEdge, MessageVector>;

/// Dependency-closed two-pass order of all 2|E| directed edges:
/// leaves-to-root, then root-to-leaves.
struct Schedule {
  std::vector<DirectedEdge> order;
};

Schedule make_schedule(const Graph& tree, int root);

MessageVector bp_message(const Graph& tree, const PotentialSet& pots, int j, int i,
                         const MessageStore& store, bool rescale = true);

BeliefVector bp_belief(const Graph& tree, const PotentialSet& pots, int i,
                       const MessageStore& store);

std::map<int, BeliefVector> run_tree_bp(const Graph& tree, const PotentialSet& pots,
                                        bool rescale = true);

}  // namespace lcbp
