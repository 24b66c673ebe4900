#pragma once

#include <map>

#include "lcbp/cutset.hpp"
#include "lcbp/message_matrix.hpp"
#include "lcbp/tree_bp.hpp"

namespace lcbp {

using MatrixStore = std::map<DirectedEdge, MessageMatrix>;

/// The agreed global ordering of the loop cutset: ascending node id.
ColumnOrdering cutset_ordering(const AssociatedTree& t, int alphabet);

/// One message of global Conditioning: every column is a full sum-product
/// message for one loop cutset configuration. Copies of cutset nodes fuse a
/// split self potential restricted to the column's value of that node.
MessageMatrix conditioned_message(const AssociatedTree& t, const SplitPotentials& splits,
                                  const PotentialSet& pots, int sender, int receiver,
                                  const MatrixStore& store);

BeliefMatrix conditioned_belief(const AssociatedTree& t, const SplitPotentials& splits,
                                const PotentialSet& pots, int vertex,
                                const MatrixStore& store);

/// Row-wise sum over all columns; log_scale carries over.
BeliefVector combine_beliefs(const BeliefMatrix& zb);

struct ConditioningResult {
  std::map<int, std::vector<double>> marginals;  // original node -> probabilities
  std::map<int, BeliefVector> beliefs;           // original node -> combined belief
  std::vector<MessageMatrix> message_dump;       // filled when dump_messages is set
};

ConditioningResult run_conditioning(const Graph& g, const PotentialSet& pots,
                                    const AssociatedTree& t, bool dump_messages = false);

}  // namespace lcbp
