#include "lcbp/conditioning.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "lcbp/numeric.hpp"

namespace lcbp {

ColumnOrdering cutset_ordering(const AssociatedTree& t, int alphabet) {
  return ColumnOrdering{t.cutset, alphabet};
}

namespace {

std::vector<const MessageMatrix*> gather_incoming(const AssociatedTree& t, int vertex,
                                                  int skip, const MatrixStore& store,
                                                  const ColumnOrdering& expected,
                                                  double* log_scale_sum) {
  std::vector<const MessageMatrix*> incoming;
  for (int k : t.tree.neighbors(vertex)) {
    if (k == skip) continue;
    auto it = store.find({k, vertex});
    if (it == store.end()) {
      throw std::invalid_argument("conditioning: missing incoming message " +
                                  std::to_string(k) + "->" + std::to_string(vertex));
    }
    if (!(it->second.conditioning == expected)) {
      throw std::invalid_argument("conditioning: message " + std::to_string(k) + "->" +
                                  std::to_string(vertex) +
                                  " has the wrong column layout");
    }
    incoming.push_back(&it->second);
    *log_scale_sum += it->second.log_scale;
  }
  return incoming;
}

// Writes the (possibly value-restricted) self potential of `vertex` for one
// column into `out`.
void self_potential_column(const AssociatedTree& t, const SplitPotentials& splits,
                           const PotentialSet& pots, int vertex,
                           const ColumnOrdering& ordering, std::size_t column,
                           std::vector<double>& out) {
  if (!t.is_copy(vertex)) {
    const auto& phi = pots.phi.at(vertex);
    std::copy(phi.begin(), phi.end(), out.begin());
    return;
  }
  const auto& phi = splits.phi.at(vertex);
  const int x = ordering.digit_of(column, t.base(vertex));
  for (std::size_t r = 0; r < out.size(); ++r) {
    out[r] = static_cast<int>(r) == x ? phi[r] : 0.0;
  }
}

}  // namespace

MessageMatrix conditioned_message(const AssociatedTree& t, const SplitPotentials& splits,
                                  const PotentialSet& pots, int sender, int receiver,
                                  const MatrixStore& store) {
  const int q = pots.alphabet_size;
  const ColumnOrdering full = cutset_ordering(t, q);
  const std::size_t columns = full.columns();

  double log_scale = 0.0;
  const auto incoming = gather_incoming(t, sender, receiver, store, full, &log_scale);
  const auto em = pots.edge_matrix(t.base(sender), t.base(receiver));

  MessageMatrix out;
  out.from = sender;
  out.to = receiver;
  out.conditioning = full;
  out.rows = q;
  out.values.resize(columns * static_cast<std::size_t>(q));

  std::vector<double> fused(q);
  for (std::size_t c = 0; c < columns; ++c) {
    self_potential_column(t, splits, pots, sender, full, c, fused);
    for (const MessageMatrix* m : incoming) {
      fuse(fused, std::span<const double>(m->values).subspan(c * q, q));
    }
    propagate(em, fused, std::span<double>(out.values).subspan(c * q, q));
  }
  out.log_scale = log_scale + rescale_max(out.values);
  return out;
}

BeliefMatrix conditioned_belief(const AssociatedTree& t, const SplitPotentials& splits,
                                const PotentialSet& pots, int vertex,
                                const MatrixStore& store) {
  const int q = pots.alphabet_size;
  const ColumnOrdering full = cutset_ordering(t, q);
  const std::size_t columns = full.columns();

  double log_scale = 0.0;
  const auto incoming = gather_incoming(t, vertex, vertex, store, full, &log_scale);

  BeliefMatrix zb;
  zb.node = vertex;
  zb.conditioning = full;
  zb.rows = q;
  zb.values.resize(columns * static_cast<std::size_t>(q));
  zb.log_scale = log_scale;

  std::vector<double> fused(q);
  for (std::size_t c = 0; c < columns; ++c) {
    self_potential_column(t, splits, pots, vertex, full, c, fused);
    for (const MessageMatrix* m : incoming) {
      fuse(fused, std::span<const double>(m->values).subspan(c * q, q));
    }
    std::copy(fused.begin(), fused.end(), zb.values.begin() + c * q);
  }
  return zb;
}

BeliefVector combine_beliefs(const BeliefMatrix& zb) {
  BeliefVector z;
  z.node = zb.node;
  z.log_scale = zb.log_scale;
  z.values.assign(zb.rows, 0.0);
  for (std::size_t c = 0; c < zb.cols(); ++c) {
    for (int r = 0; r < zb.rows; ++r) z.values[r] += zb.at(r, c);
  }
  return z;
}

ConditioningResult run_conditioning(const Graph& g, const PotentialSet& pots,
                                    const AssociatedTree& t, bool dump_messages) {
  if (!g.connected()) {
    throw std::invalid_argument("conditioning: graph must be connected");
  }
  pots.validate(g);
  const SplitPotentials splits = split_self_potentials(pots, t);
  const Schedule schedule = make_schedule(t.tree, t.tree.nodes().front());

  MatrixStore store;
  for (const auto& [v, w] : schedule.order) {
    store[{v, w}] = conditioned_message(t, splits, pots, v, w, store);
  }

  ConditioningResult result;
  for (int n : g.nodes()) {
    BeliefMatrix zb = conditioned_belief(t, splits, pots, t.belief_vertex(n), store);
    BeliefVector z = combine_beliefs(zb);
    z.node = n;
    result.marginals[n] = marginal(z);
    result.beliefs[n] = std::move(z);
  }
  if (dump_messages) {
    for (const auto& [key, m] : store) result.message_dump.push_back(m);
  }
  return result;
}

}  // namespace lcbp
