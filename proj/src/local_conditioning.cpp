#include "lcbp/local_conditioning.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

#include "lcbp/numeric.hpp"

namespace lcbp {

namespace {

std::string dir_name(int v, int w) {
  return std::to_string(v) + "->" + std::to_string(w);
}

std::vector<int> sorted_union(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<int> sorted_difference(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool is_subset(const std::vector<int>& inner, const std::vector<int>& outer) {
  return std::includes(outer.begin(), outer.end(), inner.begin(), inner.end());
}

}  // namespace

const std::vector<int>& RelevantSets::edge_rel(int v, int w) const {
  auto it = edge_relevant.find(make_edge(v, w));
  if (it == edge_relevant.end()) {
    throw std::invalid_argument("relevant sets: unknown tree edge " + dir_name(v, w));
  }
  return it->second;
}

RelevantSets compute_relevant_sets(const AssociatedTree& t) {
  RelevantSets rs;
  const Graph& tree = t.tree;
  const std::vector<int> vertices = tree.nodes();
  if (vertices.empty()) return rs;

  std::map<int, std::size_t> cut_index;
  for (std::size_t k = 0; k < t.cutset.size(); ++k) cut_index[t.cutset[k]] = k;
  const std::size_t n_cut = t.cutset.size();

  std::vector<int> total(n_cut, 0);
  for (const auto& [l, copies] : t.copies_of) {
    total[cut_index.at(l)] = static_cast<int>(copies.size());
  }

  // Root the tree and collect per-subtree copy counts in one upward pass;
  // the downward direction is total minus subtree.
  const int root = vertices.front();
  std::map<int, int> parent{{root, root}};
  std::vector<int> order{root};
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (int w : tree.neighbors(order[k])) {
      if (!parent.count(w)) {
        parent[w] = order[k];
        order.push_back(w);
      }
    }
  }

  std::map<int, std::vector<int>> subtree;
  for (int v : vertices) {
    auto& counts = subtree[v];
    counts.assign(n_cut, 0);
    if (t.is_copy(v)) counts[cut_index.at(t.base(v))] = 1;
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (*it == root) continue;
    auto& up = subtree[parent[*it]];
    const auto& own = subtree[*it];
    for (std::size_t k = 0; k < n_cut; ++k) up[k] += own[k];
  }

  auto fill_directed = [&](int v, int w, const std::vector<int>& counts) {
    auto& up = rs.upstream[{v, w}];
    for (std::size_t k = 0; k < n_cut; ++k) {
      if (counts[k] == total[k]) up.push_back(t.cutset[k]);
    }
  };
  for (const auto& e : tree.edges()) {
    const auto [child, par] =
        parent[e.first] == e.second ? e : NodePair{e.second, e.first};
    fill_directed(child, par, subtree[child]);
    std::vector<int> rest(n_cut);
    for (std::size_t k = 0; k < n_cut; ++k) rest[k] = total[k] - subtree[child][k];
    fill_directed(par, child, rest);

    auto& rel = rs.edge_relevant[e];
    for (std::size_t k = 0; k < n_cut; ++k) {
      if (0 < subtree[child][k] && subtree[child][k] < total[k]) {
        rel.push_back(t.cutset[k]);
      }
    }
  }

  for (int v : vertices) {
    auto& rel = rs.node_relevant[v];
    for (int w : tree.neighbors(v)) rel = sorted_union(rel, rs.edge_rel(v, w));
  }

  for (int v : vertices) {
    for (int w : tree.neighbors(v)) {
      std::vector<int> fused;
      for (int k : tree.neighbors(v)) {
        if (k != w) fused = sorted_union(fused, rs.edge_rel(k, v));
      }
      rs.summed_out[{v, w}] = sorted_difference(fused, rs.edge_rel(v, w));
    }
  }
  return rs;
}

PermutationMap PermutationMap::between(const std::vector<int>& source,
                                       const std::vector<int>& target) {
  if (source.size() != target.size() ||
      !std::is_permutation(source.begin(), source.end(), target.begin())) {
    throw std::invalid_argument("reorder: orderings are not permutations of each other");
  }
  PermutationMap pm;
  pm.source = source;
  pm.target = target;
  pm.from_source.resize(target.size());
  for (std::size_t tpos = 0; tpos < target.size(); ++tpos) {
    pm.from_source[tpos] = static_cast<std::size_t>(
        std::find(source.begin(), source.end(), target[tpos]) - source.begin());
  }
  return pm;
}

std::size_t PermutationMap::apply(std::size_t source_index, int radix) const {
  const std::size_t n = source.size();
  std::vector<int> digits(n);
  std::size_t rest = source_index;
  for (std::size_t k = n; k-- > 0;) {
    digits[k] = static_cast<int>(rest % static_cast<std::size_t>(radix));
    rest /= static_cast<std::size_t>(radix);
  }
  std::size_t out = 0;
  for (std::size_t tpos = 0; tpos < n; ++tpos) {
    out = out * static_cast<std::size_t>(radix) +
          static_cast<std::size_t>(digits[from_source[tpos]]);
  }
  return out;
}

std::vector<std::vector<int>> PermutationMap::matrix() const {
  std::vector<std::vector<int>> p(target.size(), std::vector<int>(source.size(), 0));
  for (std::size_t tpos = 0; tpos < target.size(); ++tpos) {
    p[tpos][from_source[tpos]] = 1;
  }
  return p;
}

MessageMatrix expand(const MessageMatrix& m, const std::vector<int>& target_set) {
  std::vector<int> target = target_set;
  std::sort(target.begin(), target.end());
  std::vector<int> current = m.conditioning.nodes;
  std::sort(current.begin(), current.end());
  if (!is_subset(current, target)) {
    throw std::invalid_argument("expand: current conditioning is not a subset of the target");
  }
  const std::vector<int> fresh = sorted_difference(target, current);
  if (fresh.empty()) return m;

  MessageMatrix out = m;
  out.conditioning.nodes = fresh;
  out.conditioning.nodes.insert(out.conditioning.nodes.end(), m.conditioning.nodes.begin(),
                                m.conditioning.nodes.end());
  std::size_t replicas = 1;
  for (std::size_t k = 0; k < fresh.size(); ++k) {
    replicas *= static_cast<std::size_t>(m.conditioning.radix);
  }
  out.values.resize(m.values.size() * replicas);
  for (std::size_t rep = 0; rep < replicas; ++rep) {
    std::copy(m.values.begin(), m.values.end(),
              out.values.begin() + static_cast<std::ptrdiff_t>(rep * m.values.size()));
  }
  return out;
}

MessageMatrix reorder(const MessageMatrix& m, const ColumnOrdering& target) {
  if (target.radix != m.conditioning.radix) {
    throw std::invalid_argument("reorder: radix mismatch");
  }
  if (target.nodes == m.conditioning.nodes) return m;
  const PermutationMap pm = PermutationMap::between(m.conditioning.nodes, target.nodes);

  MessageMatrix out = m;
  out.conditioning = target;
  const std::size_t q = static_cast<std::size_t>(m.rows);
  for (std::size_t c = 0; c < m.cols(); ++c) {
    const std::size_t tc = pm.apply(c, m.conditioning.radix);
    std::copy(m.values.begin() + static_cast<std::ptrdiff_t>(c * q),
              m.values.begin() + static_cast<std::ptrdiff_t>((c + 1) * q),
              out.values.begin() + static_cast<std::ptrdiff_t>(tc * q));
  }
  return out;
}

MessageMatrix sum_out(const MessageMatrix& m, const std::vector<int>& drop) {
  std::vector<int> dropped = drop;
  std::sort(dropped.begin(), dropped.end());
  for (int d : dropped) {
    if (!m.conditioning.contains(d)) {
      throw std::invalid_argument("sum_out: node " + std::to_string(d) +
                                  " is not in the conditioning set");
    }
  }
  if (dropped.empty()) return m;

  MessageMatrix out = m;
  out.conditioning.nodes.clear();
  for (int n : m.conditioning.nodes) {
    if (!std::binary_search(dropped.begin(), dropped.end(), n)) {
      out.conditioning.nodes.push_back(n);
    }
  }

  // Weight of each kept source digit position within the reduced index.
  const std::size_t n = m.conditioning.nodes.size();
  const std::size_t q = static_cast<std::size_t>(m.conditioning.radix);
  std::vector<std::size_t> weight(n, 0);
  std::size_t w = 1;
  for (std::size_t k = n; k-- > 0;) {
    if (!std::binary_search(dropped.begin(), dropped.end(), m.conditioning.nodes[k])) {
      weight[k] = w;
      w *= q;
    }
  }

  out.values.assign(out.conditioning.columns() * static_cast<std::size_t>(m.rows), 0.0);
  std::vector<int> digits(n, 0);
  for (std::size_t c = 0; c < m.cols(); ++c) {
    std::size_t kept = 0;
    for (std::size_t k = 0; k < n; ++k) kept += weight[k] * static_cast<std::size_t>(digits[k]);
    for (int r = 0; r < m.rows; ++r) out.at(r, kept) += m.at(r, c);
    for (std::size_t k = n; k-- > 0;) {
      if (++digits[k] < static_cast<int>(q)) break;
      digits[k] = 0;
    }
  }
  return out;
}

namespace {

// Expand + reorder every incoming matrix to the canonical ordering of the
// working set, fuse with the sender's (possibly value-restricted) self
// potential, column by column.
MessageMatrix fuse_local(int alphabet, const std::vector<const MessageMatrix*>& incoming,
                         const std::vector<double>& self_phi, bool conditioned,
                         int conditioned_node, const std::vector<int>& extra,
                         double* log_scale_sum, CostCounter* cost) {
  std::vector<int> working = extra;
  for (const MessageMatrix* m : incoming) {
    std::vector<int> nodes = m->conditioning.nodes;
    std::sort(nodes.begin(), nodes.end());
    working = sorted_union(working, nodes);
  }
  const ColumnOrdering target{working, alphabet};
  const std::size_t columns = target.columns();
  const std::size_t q = static_cast<std::size_t>(alphabet);

  std::vector<MessageMatrix> aligned;
  aligned.reserve(incoming.size());
  for (const MessageMatrix* m : incoming) {
    aligned.push_back(reorder(expand(*m, working), target));
    *log_scale_sum += m->log_scale;
  }

  MessageMatrix fused;
  fused.conditioning = target;
  fused.rows = alphabet;
  fused.values.resize(columns * q);

  const bool restrict_rows = conditioned && target.contains(conditioned_node);
  const std::size_t cond_pos = restrict_rows ? target.position_of(conditioned_node) : 0;
  for (std::size_t c = 0; c < columns; ++c) {
    double* col = fused.values.data() + c * q;
    if (restrict_rows) {
      const int x = target.digit(c, cond_pos);
      for (std::size_t r = 0; r < q; ++r) {
        col[r] = static_cast<int>(r) == x ? self_phi[r] : 0.0;
      }
    } else {
      std::copy(self_phi.begin(), self_phi.end(), col);
    }
    for (const MessageMatrix& m : aligned) {
      fuse(std::span<double>(col, q), std::span<const double>(m.values).subspan(c * q, q));
    }
  }
  if (cost) {
    cost->multiplies += static_cast<long long>(aligned.size()) *
                        static_cast<long long>(columns) * static_cast<long long>(q);
  }
  return fused;
}

}  // namespace

MessageMatrix lc_send(int alphabet, const std::vector<const MessageMatrix*>& incoming,
                      const std::vector<double>& self_phi, bool conditioned,
                      int conditioned_node, const std::vector<double>& edge_matrix,
                      const std::vector<int>& out_relevant, int from_vertex,
                      int to_vertex, CostCounter* cost) {
  // The sender's own conditioning joins the working set only while the
  // outgoing edge still carries that node; otherwise the restriction is
  // summed out right here by using the plain split potential.
  std::vector<int> extra;
  if (conditioned &&
      std::binary_search(out_relevant.begin(), out_relevant.end(), conditioned_node)) {
    extra.push_back(conditioned_node);
  }
  double log_scale = 0.0;
  MessageMatrix fused = fuse_local(alphabet, incoming, self_phi, conditioned,
                                   conditioned_node, extra, &log_scale, cost);
  if (!is_subset(out_relevant, fused.conditioning.nodes)) {
    throw std::invalid_argument("lc_send: relevant-set mismatch on " +
                                dir_name(from_vertex, to_vertex));
  }

  const std::size_t q = static_cast<std::size_t>(alphabet);
  MessageMatrix propagated = fused;
  for (std::size_t c = 0; c < fused.cols(); ++c) {
    propagate(edge_matrix, std::span<const double>(fused.values).subspan(c * q, q),
              std::span<double>(propagated.values).subspan(c * q, q));
  }
  if (cost) {
    cost->multiplies += static_cast<long long>(fused.cols()) *
                        static_cast<long long>(q) * static_cast<long long>(q);
  }

  MessageMatrix out =
      sum_out(propagated, sorted_difference(fused.conditioning.nodes, out_relevant));
  out.from = from_vertex;
  out.to = to_vertex;
  out.log_scale = log_scale + rescale_max(out.values);
  return out;
}

BeliefVector lc_fuse_belief(int alphabet, const std::vector<const MessageMatrix*>& incoming,
                            const std::vector<double>& self_phi, bool conditioned,
                            int conditioned_node, int node, CostCounter* cost) {
  double log_scale = 0.0;
  const MessageMatrix fused = fuse_local(alphabet, incoming, self_phi, conditioned,
                                         conditioned_node, {}, &log_scale, cost);
  BeliefVector z;
  z.node = node;
  z.log_scale = log_scale;
  z.values.assign(alphabet, 0.0);
  for (std::size_t c = 0; c < fused.cols(); ++c) {
    for (int r = 0; r < alphabet; ++r) z.values[r] += fused.at(r, c);
  }
  return z;
}

namespace {

std::vector<const MessageMatrix*> gather_lc_incoming(const AssociatedTree& t,
                                                     const RelevantSets& rs, int vertex,
                                                     int skip, const MatrixStore& store) {
  std::vector<const MessageMatrix*> incoming;
  for (int k : t.tree.neighbors(vertex)) {
    if (k == skip) continue;
    auto it = store.find({k, vertex});
    if (it == store.end()) {
      throw std::invalid_argument("lc: missing incoming message " + dir_name(k, vertex));
    }
    if (it->second.conditioning.nodes != rs.edge_rel(k, vertex)) {
      throw std::invalid_argument("lc: message " + dir_name(k, vertex) +
                                  " is not conditioned on its relevant set");
    }
    incoming.push_back(&it->second);
  }
  return incoming;
}

}  // namespace

MessageMatrix lc_message(const AssociatedTree& t, const SplitPotentials& splits,
                         const PotentialSet& pots, const RelevantSets& rs, int sender,
                         int receiver, const MatrixStore& store, CostCounter* cost) {
  const auto incoming = gather_lc_incoming(t, rs, sender, receiver, store);
  const bool conditioned = t.is_copy(sender);
  const std::vector<double>& phi =
      conditioned ? splits.phi.at(sender) : pots.phi.at(sender);
  MessageMatrix out = lc_send(pots.alphabet_size, incoming, phi, conditioned,
                              conditioned ? t.base(sender) : 0,
                              pots.edge_matrix(t.base(sender), t.base(receiver)),
                              rs.edge_rel(sender, receiver), sender, receiver, cost);
  return out;
}

BeliefVector lc_belief(const AssociatedTree& t, const SplitPotentials& splits,
                       const PotentialSet& pots, const RelevantSets& rs, int vertex,
                       const MatrixStore& store, CostCounter* cost) {
  const auto incoming = gather_lc_incoming(t, rs, vertex, vertex, store);
  const bool conditioned = t.is_copy(vertex);
  const std::vector<double>& phi =
      conditioned ? splits.phi.at(vertex) : pots.phi.at(vertex);
  return lc_fuse_belief(pots.alphabet_size, incoming, phi, conditioned,
                        conditioned ? t.base(vertex) : 0, vertex, cost);
}

ComplexityReport make_complexity_report(const AssociatedTree& t, const RelevantSets& rs,
                                        int alphabet) {
  ComplexityReport report;
  for (const auto& [orig, te] : t.edge_map) {
    const auto& rel = rs.edge_rel(te.first, te.second);
    report.edge_relevant_size[orig] = static_cast<int>(rel.size());
    std::size_t cols = 1;
    for (std::size_t k = 0; k < rel.size(); ++k) cols *= static_cast<std::size_t>(alphabet);
    report.edge_columns[orig] = cols;
  }
  for (const auto& [v, rel] : rs.node_relevant) {
    report.node_relevant_size[v] = static_cast<int>(rel.size());
    report.max_node_relevant = std::max(report.max_node_relevant,
                                        static_cast<int>(rel.size()));
  }
  return report;
}

LocalConditioningResult run_local_conditioning(const Graph& g, const PotentialSet& pots,
                                               const AssociatedTree& t,
                                               bool dump_messages) {
  if (!g.connected()) {
    throw std::invalid_argument("lc: graph must be connected");
  }
  pots.validate(g);
  const SplitPotentials splits = split_self_potentials(pots, t);
  const RelevantSets rs = compute_relevant_sets(t);
  const Schedule schedule = make_schedule(t.tree, t.tree.nodes().front());

  CostCounter cost;
  MatrixStore store;
  for (const auto& [v, w] : schedule.order) {
    store[{v, w}] = lc_message(t, splits, pots, rs, v, w, store, &cost);
  }

  LocalConditioningResult result;
  for (int n : g.nodes()) {
    BeliefVector z =
        lc_belief(t, splits, pots, rs, t.belief_vertex(n), store, &cost);
    z.node = n;
    result.marginals[n] = marginal(z);
    result.beliefs[n] = std::move(z);
  }
  result.report = make_complexity_report(t, rs, pots.alphabet_size);
  result.report.multiplies = cost.multiplies;
  if (dump_messages) {
    for (const auto& [key, m] : store) result.message_dump.push_back(m);
  }
  return result;
}

}  // namespace lcbp
