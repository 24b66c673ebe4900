#pragma once

#include <cstdint>
#include <set>

#include "lcbp/local_conditioning.hpp"

namespace lcbp {

/// Self-describing serialized message matrix. The receiver validates the
/// ordering against the relevant set it expects for the edge.
struct WireMessage {
  int from = 0;
  int to = 0;
  std::vector<int> ordering;
  int rows = 0;
  std::size_t columns = 0;
  std::vector<double> values;  // row-major
  double log_scale = 0.0;
};

WireMessage to_wire(const MessageMatrix& m, int from_node, int to_node);
MessageMatrix from_wire(const WireMessage& w, int from_vertex, int to_vertex);

/// One tree vertex owned by an actor: the node itself, or one of the node's
/// copies carrying a split potential.
struct ActorVertex {
  int vertex = 0;
  bool is_copy = false;
  std::vector<double> phi;
};

/// Per incident original edge: the tree endpoints, the relevant set both
/// directions share, the sum-out set for the outgoing direction, and the
/// oriented edge potential.
struct ActorEdge {
  int peer = 0;
  int self_vertex = 0;
  int peer_vertex = 0;
  std::vector<int> relevant;
  std::vector<int> summed_out;
  std::vector<double> edge_matrix;
};

/// Fixed at setup; an actor never reads any global structure at runtime.
struct ActorView {
  int id = 0;
  int alphabet = 2;
  std::vector<ActorVertex> vertices;  // sorted by vertex id
  std::vector<ActorEdge> edges;       // sorted by peer id
  std::vector<int> node_relevant;     // relevant set of the belief vertex
  int belief_vertex = 0;
};

class NodeActor {
 public:
  explicit NodeActor(ActorView view) : view_(std::move(view)) {}

  int id() const { return view_.id; }
  const ActorView& view() const { return view_; }

  /// Peers this actor can send to now: all other inboxes feeding the edge's
  /// vertex are filled and the message has not been sent yet.
  std::vector<int> ready_peers() const;
  WireMessage compute_message(int peer) const;
  void mark_sent(int peer);
  void receive(const WireMessage& w);

  bool belief_ready() const;
  BeliefVector belief() const;

 private:
  const ActorEdge& edge_to(int peer) const;
  bool can_send(const ActorEdge& e) const;
  std::vector<const MessageMatrix*> incoming_for(int vertex, int skip_peer) const;

  ActorView view_;
  std::map<int, MessageMatrix> inbox_;  // peer -> received matrix
  std::set<int> sent_;
};

std::map<int, ActorView> build_actor_views(const Graph& g, const PotentialSet& pots,
                                           const AssociatedTree& t,
                                           const RelevantSets& rs);

/// Rebuilds every view from the setup artifacts and rejects any deviation, so
/// a view seeded with non-local data fails here.
void validate_actor_views(const std::map<int, ActorView>& views, const Graph& g,
                          const PotentialSet& pots, const AssociatedTree& t,
                          const RelevantSets& rs);

std::map<int, NodeActor> setup_actors(const Graph& g, const PotentialSet& pots,
                                      const AssociatedTree& t, const RelevantSets& rs);

struct DistributedResult {
  std::map<int, std::vector<double>> marginals;
  std::vector<WireMessage> wire_log;
  int rounds = 0;        // synchronous rounds to quiescence
  std::size_t steps = 0; // single-message firings (asynchronous)
};

/// Synchronous flooding: every sendable message of a round is computed from
/// the previous round's inboxes, then delivered together.
DistributedResult run_distributed_sync(std::map<int, NodeActor>& actors, int workers = 1);

/// Fires one randomly chosen ready message at a time.
DistributedResult run_distributed_async(std::map<int, NodeActor>& actors,
                                        std::uint64_t seed);

}  // namespace lcbp
