#include "lcbp/runtime.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>

namespace lcbp {

WireMessage to_wire(const MessageMatrix& m, int from_node, int to_node) {
  WireMessage w;
  w.from = from_node;
  w.to = to_node;
  w.ordering = m.conditioning.nodes;
  w.rows = m.rows;
  w.columns = m.cols();
  w.log_scale = m.log_scale;
  w.values.resize(m.values.size());
  for (int r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < w.columns; ++c) {
      w.values[static_cast<std::size_t>(r) * w.columns + c] = m.at(r, c);
    }
  }
  return w;
}

MessageMatrix from_wire(const WireMessage& w, int from_vertex, int to_vertex) {
  MessageMatrix m;
  m.from = from_vertex;
  m.to = to_vertex;
  m.conditioning = ColumnOrdering{w.ordering, w.rows};
  m.rows = w.rows;
  m.log_scale = w.log_scale;
  m.values.resize(w.values.size());
  for (int r = 0; r < w.rows; ++r) {
    for (std::size_t c = 0; c < w.columns; ++c) {
      m.at(r, c) = w.values[static_cast<std::size_t>(r) * w.columns + c];
    }
  }
  return m;
}

const ActorEdge& NodeActor::edge_to(int peer) const {
  for (const auto& e : view_.edges) {
    if (e.peer == peer) return e;
  }
  throw std::invalid_argument("actor " + std::to_string(view_.id) +
                              ": no edge to node " + std::to_string(peer));
}

bool NodeActor::can_send(const ActorEdge& e) const {
  for (const auto& other : view_.edges) {
    if (other.peer == e.peer) continue;
    if (other.self_vertex != e.self_vertex) continue;
    if (!inbox_.count(other.peer)) return false;
  }
  return true;
}

std::vector<int> NodeActor::ready_peers() const {
  std::vector<int> out;
  for (const auto& e : view_.edges) {
    if (!sent_.count(e.peer) && can_send(e)) out.push_back(e.peer);
  }
  return out;
}

std::vector<const MessageMatrix*> NodeActor::incoming_for(int vertex,
                                                          int skip_peer) const {
  // Collect by ascending peer vertex so fusion order matches the
  // centralized run exactly.
  std::vector<std::pair<int, const MessageMatrix*>> found;
  for (const auto& e : view_.edges) {
    if (e.self_vertex != vertex || e.peer == skip_peer) continue;
    auto it = inbox_.find(e.peer);
    if (it == inbox_.end()) {
      throw std::invalid_argument("actor " + std::to_string(view_.id) +
                                  ": message from node " + std::to_string(e.peer) +
                                  " has not arrived");
    }
    found.emplace_back(e.peer_vertex, &it->second);
  }
  std::sort(found.begin(), found.end());
  std::vector<const MessageMatrix*> out;
  out.reserve(found.size());
  for (const auto& [vtx, m] : found) out.push_back(m);
  return out;
}

WireMessage NodeActor::compute_message(int peer) const {
  const ActorEdge& e = edge_to(peer);
  const auto incoming = incoming_for(e.self_vertex, peer);
  const ActorVertex* vertex = nullptr;
  for (const auto& v : view_.vertices) {
    if (v.vertex == e.self_vertex) vertex = &v;
  }
  if (!vertex) {
    throw std::logic_error("actor " + std::to_string(view_.id) +
                           ": edge references a vertex the actor does not own");
  }
  MessageMatrix m = lc_send(view_.alphabet, incoming, vertex->phi, vertex->is_copy,
                            view_.id, e.edge_matrix, e.relevant, e.self_vertex,
                            e.peer_vertex);
  return to_wire(m, view_.id, peer);
}

void NodeActor::mark_sent(int peer) {
  edge_to(peer);  // validates
  sent_.insert(peer);
}

void NodeActor::receive(const WireMessage& w) {
  if (w.to != view_.id) {
    throw std::invalid_argument("actor " + std::to_string(view_.id) +
                                ": message addressed to node " + std::to_string(w.to));
  }
  const ActorEdge& e = edge_to(w.from);
  if (w.ordering != e.relevant) {
    throw std::invalid_argument("actor " + std::to_string(view_.id) +
                                ": message from node " + std::to_string(w.from) +
                                " is conditioned on an unexpected set");
  }
  if (w.rows != view_.alphabet || w.values.size() !=
      static_cast<std::size_t>(w.rows) * w.columns) {
    throw std::invalid_argument("actor " + std::to_string(view_.id) +
                                ": malformed message from node " + std::to_string(w.from));
  }
  inbox_[w.from] = from_wire(w, e.peer_vertex, e.self_vertex);
}

bool NodeActor::belief_ready() const {
  for (const auto& e : view_.edges) {
    if (e.self_vertex == view_.belief_vertex && !inbox_.count(e.peer)) return false;
  }
  return true;
}

BeliefVector NodeActor::belief() const {
  const auto incoming = incoming_for(view_.belief_vertex, view_.id);
  const ActorVertex* vertex = nullptr;
  for (const auto& v : view_.vertices) {
    if (v.vertex == view_.belief_vertex) vertex = &v;
  }
  if (!vertex) {
    throw std::logic_error("actor " + std::to_string(view_.id) +
                           ": belief vertex is not owned by the actor");
  }
  return lc_fuse_belief(view_.alphabet, incoming, vertex->phi, vertex->is_copy,
                        view_.id, view_.id);
}

std::map<int, ActorView> build_actor_views(const Graph& g, const PotentialSet& pots,
                                           const AssociatedTree& t,
                                           const RelevantSets& rs) {
  const SplitPotentials splits = split_self_potentials(pots, t);
  std::map<int, ActorView> views;
  for (int n : g.nodes()) {
    ActorView view;
    view.id = n;
    view.alphabet = pots.alphabet_size;
    auto copies = t.copies_of.find(n);
    if (copies == t.copies_of.end()) {
      view.vertices.push_back({n, false, pots.phi.at(n)});
    } else {
      for (int c : copies->second) view.vertices.push_back({c, true, splits.phi.at(c)});
    }
    for (int j : g.neighbors(n)) {
      const NodePair orig = make_edge(n, j);
      ActorEdge e;
      e.peer = j;
      e.self_vertex = t.vertex_for(n, orig);
      e.peer_vertex = t.vertex_for(j, orig);
      e.relevant = rs.edge_rel(e.self_vertex, e.peer_vertex);
      e.summed_out = rs.summed_out.at({e.self_vertex, e.peer_vertex});
      e.edge_matrix = pots.edge_matrix(n, j);
      view.edges.push_back(std::move(e));
    }
    view.belief_vertex = t.belief_vertex(n);
    view.node_relevant = rs.node_relevant.at(view.belief_vertex);
    views.emplace(n, std::move(view));
  }
  return views;
}

void validate_actor_views(const std::map<int, ActorView>& views, const Graph& g,
                          const PotentialSet& pots, const AssociatedTree& t,
                          const RelevantSets& rs) {
  const auto canonical = build_actor_views(g, pots, t, rs);
  if (views.size() != canonical.size()) {
    throw std::invalid_argument("actor setup: wrong number of actors");
  }
  for (const auto& [n, expect] : canonical) {
    auto it = views.find(n);
    if (it == views.end()) {
      throw std::invalid_argument("actor setup: missing actor for node " +
                                  std::to_string(n));
    }
    const ActorView& got = it->second;
    const std::string who = "actor " + std::to_string(n);
    if (got.id != expect.id || got.alphabet != expect.alphabet ||
        got.belief_vertex != expect.belief_vertex ||
        got.node_relevant != expect.node_relevant) {
      throw std::invalid_argument(who + ": view does not match its setup artifacts");
    }
    if (got.vertices.size() != expect.vertices.size()) {
      throw std::invalid_argument(who + ": view owns the wrong vertices");
    }
    for (std::size_t k = 0; k < got.vertices.size(); ++k) {
      if (got.vertices[k].vertex != expect.vertices[k].vertex ||
          got.vertices[k].is_copy != expect.vertices[k].is_copy ||
          got.vertices[k].phi != expect.vertices[k].phi) {
        throw std::invalid_argument(who + ": view holds potentials that are not its own");
      }
    }
    if (got.edges.size() != expect.edges.size()) {
      throw std::invalid_argument(who + ": view has the wrong incident edges");
    }
    for (std::size_t k = 0; k < got.edges.size(); ++k) {
      const ActorEdge& a = got.edges[k];
      const ActorEdge& b = expect.edges[k];
      if (a.peer != b.peer || a.self_vertex != b.self_vertex ||
          a.peer_vertex != b.peer_vertex || a.relevant != b.relevant ||
          a.summed_out != b.summed_out || a.edge_matrix != b.edge_matrix) {
        throw std::invalid_argument(who + ": edge setup for peer " +
                                    std::to_string(b.peer) + " is not local");
      }
    }
  }
}

std::map<int, NodeActor> setup_actors(const Graph& g, const PotentialSet& pots,
                                      const AssociatedTree& t, const RelevantSets& rs) {
  auto views = build_actor_views(g, pots, t, rs);
  validate_actor_views(views, g, pots, t, rs);
  std::map<int, NodeActor> actors;
  for (auto& [n, view] : views) actors.emplace(n, NodeActor(std::move(view)));
  return actors;
}

namespace {

std::size_t total_sends(const std::map<int, NodeActor>& actors) {
  std::size_t n = 0;
  for (const auto& [id, actor] : actors) n += actor.view().edges.size();
  return n;
}

void collect_marginals(const std::map<int, NodeActor>& actors, DistributedResult* out) {
  for (const auto& [id, actor] : actors) {
    BeliefVector z = actor.belief();
    out->marginals[id] = marginal(z);
  }
}

}  // namespace

DistributedResult run_distributed_sync(std::map<int, NodeActor>& actors, int workers) {
  DistributedResult result;
  const std::size_t total = total_sends(actors);
  std::size_t sent = 0;
  while (sent < total) {
    std::vector<std::pair<int, int>> ready;  // (actor, peer)
    for (const auto& [id, actor] : actors) {
      for (int peer : actor.ready_peers()) ready.emplace_back(id, peer);
    }
    if (ready.empty()) {
      throw std::runtime_error("distributed run: deadlock, no sendable message left");
    }

    std::vector<WireMessage> wires(ready.size());
    auto compute_range = [&](std::size_t lo, std::size_t hi) {
      for (std::size_t k = lo; k < hi; ++k) {
        wires[k] = actors.at(ready[k].first).compute_message(ready[k].second);
      }
    };
    const int n_workers = std::max(1, std::min<int>(workers, static_cast<int>(ready.size())));
    if (n_workers == 1) {
      compute_range(0, ready.size());
    } else {
      std::vector<std::thread> pool;
      const std::size_t chunk = (ready.size() + n_workers - 1) / n_workers;
      for (int w = 0; w < n_workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(ready.size(), lo + chunk);
        if (lo < hi) pool.emplace_back(compute_range, lo, hi);
      }
      for (auto& th : pool) th.join();
    }

    for (std::size_t k = 0; k < ready.size(); ++k) {
      actors.at(ready[k].first).mark_sent(ready[k].second);
      actors.at(ready[k].second).receive(wires[k]);
      result.wire_log.push_back(std::move(wires[k]));
    }
    sent += ready.size();
    ++result.rounds;
  }
  result.steps = result.wire_log.size();
  collect_marginals(actors, &result);
  return result;
}

DistributedResult run_distributed_async(std::map<int, NodeActor>& actors,
                                        std::uint64_t seed) {
  DistributedResult result;
  std::mt19937_64 rng(seed);
  const std::size_t total = total_sends(actors);
  while (result.wire_log.size() < total) {
    std::vector<std::pair<int, int>> ready;
    for (const auto& [id, actor] : actors) {
      for (int peer : actor.ready_peers()) ready.emplace_back(id, peer);
    }
    if (ready.empty()) {
      throw std::runtime_error("distributed run: deadlock, no sendable message left");
    }
    const auto [from, to] = ready[rng() % ready.size()];
    WireMessage wire = actors.at(from).compute_message(to);
    actors.at(from).mark_sent(to);
    actors.at(to).receive(wire);
    result.wire_log.push_back(std::move(wire));
  }
  result.steps = result.wire_log.size();
  collect_marginals(actors, &result);
  return result;
}

}  // namespace lcbp
