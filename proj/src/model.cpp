#include "lcbp/model.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace lcbp {

namespace {

std::string edge_name(NodePair e) {
  return std::to_string(e.first) + "-" + std::to_string(e.second);
}

constexpr std::uint64_t kEnumerationGuard = std::uint64_t{1} << 24;

}  // namespace

double PotentialSet::psi_value(int i, int j, int xi, int xj) const {
  const auto e = make_edge(i, j);
  auto it = psi.find(e);
  if (it == psi.end()) {
    throw std::invalid_argument("potentials: no edge potential for " + edge_name(e));
  }
  const int q = alphabet_size;
  return i < j ? it->second[xi * q + xj] : it->second[xj * q + xi];
}

std::vector<double> PotentialSet::edge_matrix(int from, int to) const {
  const int q = alphabet_size;
  std::vector<double> m(static_cast<std::size_t>(q) * q);
  for (int xt = 0; xt < q; ++xt) {
    for (int xf = 0; xf < q; ++xf) {
      m[xt * q + xf] = psi_value(to, from, xt, xf);
    }
  }
  return m;
}

void PotentialSet::validate(const Graph& g) const {
  if (alphabet_size < 2) {
    throw std::invalid_argument("potentials: alphabet size must be at least 2");
  }
  const std::size_t q = static_cast<std::size_t>(alphabet_size);
  for (int v : g.nodes()) {
    auto it = phi.find(v);
    if (it == phi.end()) {
      throw std::invalid_argument("potentials: node " + std::to_string(v) +
                                  " has no self potential");
    }
    if (it->second.size() != q) {
      throw std::invalid_argument("potentials: self potential for node " +
                                  std::to_string(v) + " has wrong length");
    }
    for (double x : it->second) {
      if (!(x > 0.0)) {
        throw std::invalid_argument("potentials: self potential for node " +
                                    std::to_string(v) + " must be strictly positive");
      }
    }
  }
  for (const auto& e : g.edges()) {
    auto it = psi.find(e);
    if (it == psi.end()) {
      throw std::invalid_argument("potentials: edge " + edge_name(e) +
                                  " has no edge potential");
    }
    if (it->second.size() != q * q) {
      throw std::invalid_argument("potentials: edge potential for " + edge_name(e) +
                                  " has wrong shape");
    }
    for (double x : it->second) {
      if (!(x > 0.0)) {
        throw std::invalid_argument("potentials: edge potential for " + edge_name(e) +
                                    " must be strictly positive");
      }
    }
  }
}

PotentialSet expand_ising(const IsingParams& p, const Graph& g) {
  PotentialSet out;
  out.alphabet_size = 2;
  for (int v : g.nodes()) {
    auto it = p.alpha.find(v);
    if (it == p.alpha.end()) {
      throw std::invalid_argument("ising: missing alpha for node " + std::to_string(v));
    }
    out.phi[v] = {std::exp(it->second), std::exp(-it->second)};
  }
  for (const auto& e : g.edges()) {
    auto it = p.theta.find(e);
    if (it == p.theta.end()) {
      throw std::invalid_argument("ising: missing theta for edge " + edge_name(e));
    }
    const double t = std::exp(it->second);
    const double u = std::exp(-it->second);
    out.psi[e] = {t, u, u, t};
  }
  return out;
}

std::vector<double> marginal(const BeliefVector& z) {
  double sum = 0.0;
  for (double v : z.values) sum += v;
  if (!(sum > 0.0)) {
    throw std::invalid_argument("marginal: belief has non-positive sum");
  }
  std::vector<double> p(z.values.size());
  for (std::size_t k = 0; k < p.size(); ++k) p[k] = z.values[k] / sum;
  return p;
}

namespace {

// Walks every configuration of the model and hands (digits, weight) to the
// visitor. Digits follow the sorted node order.
template <typename Visitor>
void enumerate_configurations(const Graph& g, const PotentialSet& pots, Visitor&& visit) {
  if (!g.connected()) {
    throw std::invalid_argument("brute force: graph must be connected");
  }
  pots.validate(g);
  const std::vector<int> nodes = g.nodes();
  const int q = pots.alphabet_size;

  std::uint64_t configs = 1;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    configs *= static_cast<std::uint64_t>(q);
    if (configs > kEnumerationGuard) {
      throw std::invalid_argument("brute force: model exceeds the enumeration guard");
    }
  }

  std::map<int, std::size_t> pos;
  for (std::size_t k = 0; k < nodes.size(); ++k) pos[nodes[k]] = k;

  std::vector<const std::vector<double>*> phis(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) phis[k] = &pots.phi.at(nodes[k]);

  struct EdgeRef {
    std::size_t a, b;
    const std::vector<double>* table;
  };
  std::vector<EdgeRef> edges;
  for (const auto& e : g.edges()) {
    edges.push_back({pos[e.first], pos[e.second], &pots.psi.at(e)});
  }

  std::vector<int> digits(nodes.size(), 0);
  for (std::uint64_t c = 0; c < configs; ++c) {
    double w = 1.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) w *= (*phis[k])[digits[k]];
    for (const auto& e : edges) w *= (*e.table)[digits[e.a] * q + digits[e.b]];
    visit(digits, w);
    for (std::size_t k = digits.size(); k-- > 0;) {
      if (++digits[k] < q) break;
      digits[k] = 0;
    }
  }
}

}  // namespace

BeliefVector brute_force_belief(const Graph& g, const PotentialSet& pots, int i) {
  if (!g.has_node(i)) {
    throw std::invalid_argument("brute force: unknown node " + std::to_string(i));
  }
  std::size_t slot = 0;
  for (int v : g.nodes()) {
    if (v == i) break;
    ++slot;
  }
  BeliefVector z;
  z.node = i;
  z.values.assign(pots.alphabet_size, 0.0);
  enumerate_configurations(g, pots, [&](const std::vector<int>& digits, double w) {
    z.values[digits[slot]] += w;
  });
  return z;
}

std::map<int, BeliefVector> brute_force_all(const Graph& g, const PotentialSet& pots) {
  const std::vector<int> nodes = g.nodes();
  std::map<int, BeliefVector> out;
  std::vector<BeliefVector*> slots(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    auto& z = out[nodes[k]];
    z.node = nodes[k];
    z.values.assign(pots.alphabet_size, 0.0);
    slots[k] = &z;
  }
  enumerate_configurations(g, pots, [&](const std::vector<int>& digits, double w) {
    for (std::size_t k = 0; k < digits.size(); ++k) slots[k]->values[digits[k]] += w;
  });
  return out;
}

}  // namespace lcbp
