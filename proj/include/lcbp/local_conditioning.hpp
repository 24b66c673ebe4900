#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "lcbp/conditioning.hpp"

namespace lcbp {

/// Relevant-set structure of an associated tree. All keys are tree vertices.
/// upstream[(v,w)] holds the cutset nodes all of whose copies lie on v's side
/// of the edge; edge_relevant holds the cutset nodes with copies on both
/// sides; summed_out[(v,w)] holds what the sender of v->w must sum out.
struct RelevantSets {
  std::map<DirectedEdge, std::vector<int>> upstream;
  std::map<NodePair, std::vector<int>> edge_relevant;
  std::map<int, std::vector<int>> node_relevant;
  std::map<DirectedEdge, std::vector<int>> summed_out;

  const std::vector<int>& edge_rel(int v, int w) const;
};

RelevantSets compute_relevant_sets(const AssociatedTree& t);

/// Digit permutation converting column indices between two orderings of the
/// same node set. Applying it to an index permutes the index's digits; the
/// matrix form acts on digit vectors.
struct PermutationMap {
  std::vector<int> source;
  std::vector<int> target;
  std::vector<std::size_t> from_source;  // target position -> source position

  static PermutationMap between(const std::vector<int>& source,
                                const std::vector<int>& target);
  std::size_t apply(std::size_t source_index, int radix) const;
  std::vector<std::vector<int>> matrix() const;
};

/// Replicates the matrix once per configuration of target \ current nodes.
/// The new nodes come first in the resulting ordering, ascending, so the
/// whole matrix is tiled side by side.
MessageMatrix expand(const MessageMatrix& m, const std::vector<int>& target_set);

/// Permutes columns so digit positions follow the target ordering. Values
/// are moved, never recomputed.
MessageMatrix reorder(const MessageMatrix& m, const ColumnOrdering& target);

/// Adds columns that agree outside `drop`; the dropped nodes leave the
/// ordering, the rest keep their relative order.
MessageMatrix sum_out(const MessageMatrix& m, const std::vector<int>& drop);

struct CostCounter {
  long long multiplies = 0;
};

/// Everything a sender needs to form one outgoing message from local data:
/// its split or plain self potential, whether columns must be restricted to
/// the column's value of `conditioned_node`, the oriented edge potential, and
/// the relevant set of the outgoing edge.
MessageMatrix lc_send(int alphabet, const std::vector<const MessageMatrix*>& incoming,
                      const std::vector<double>& self_phi, bool conditioned,
                      int conditioned_node, const std::vector<double>& edge_matrix,
                      const std::vector<int>& out_relevant, int from_vertex,
                      int to_vertex, CostCounter* cost = nullptr);

/// Local fusion of all incoming matrices into an unconditioned belief:
/// expand + reorder to the union set, fuse, then sum every column.
BeliefVector lc_fuse_belief(int alphabet, const std::vector<const MessageMatrix*>& incoming,
                            const std::vector<double>& self_phi, bool conditioned,
                            int conditioned_node, int node, CostCounter* cost = nullptr);

MessageMatrix lc_message(const AssociatedTree& t, const SplitPotentials& splits,
                         const PotentialSet& pots, const RelevantSets& rs, int sender,
                         int receiver, const MatrixStore& store,
                         CostCounter* cost = nullptr);

BeliefVector lc_belief(const AssociatedTree& t, const SplitPotentials& splits,
                       const PotentialSet& pots, const RelevantSets& rs, int vertex,
                       const MatrixStore& store, CostCounter* cost = nullptr);

struct ComplexityReport {
  std::map<NodePair, int> edge_relevant_size;          // by original edge
  std::map<NodePair, std::size_t> edge_columns;        // by original edge
  std::map<int, int> node_relevant_size;               // by tree vertex
  int max_node_relevant = 0;
  long long multiplies = 0;
};

ComplexityReport make_complexity_report(const AssociatedTree& t, const RelevantSets& rs,
                                        int alphabet);

struct LocalConditioningResult {
  std::map<int, std::vector<double>> marginals;
  std::map<int, BeliefVector> beliefs;
  ComplexityReport report;
  std::vector<MessageMatrix> message_dump;
};

LocalConditioningResult run_local_conditioning(const Graph& g, const PotentialSet& pots,
                                               const AssociatedTree& t,
                                               bool dump_messages = false);

}  // namespace lcbp
