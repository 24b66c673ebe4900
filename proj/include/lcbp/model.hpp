#pragma once

#include <map>
#include <vector>

#include "lcbp/graph.hpp"

namespace lcbp {

/// Gibbs parametrization: strictly positive self potentials per node and edge
/// potentials per edge. Edge tables are stored once per undirected edge with
/// rows indexed by the value of the smaller endpoint; reading the reverse
/// orientation transposes.
struct PotentialSet {
  int alphabet_size = 2;
  std::map<int, std::vector<double>> phi;       // node -> |X| entries
  std::map<NodePair, std::vector<double>> psi;  // edge -> |X|*|X| row-major

  double psi_value(int i, int j, int xi, int xj) const;

  /// Propagation matrix for a message sent from -> to:
  /// m[x_to * |X| + x_from], so that out = m * in with in indexed by x_from.
  std::vector<double> edge_matrix(int from, int to) const;

  void validate(const Graph& g) const;
};

struct IsingParams {
  std::map<int, double> alpha;       // node -> field
  std::map<NodePair, double> theta;  // edge -> coupling
};

/// Binary alphabet {-1,+1} mapped to indices {0,1}:
/// phi_i = [e^{a_i}, e^{-a_i}], psi_ij = [[e^t, e^-t], [e^-t, e^t]].
PotentialSet expand_ising(const IsingParams& p, const Graph& g);

/// Unnormalized marginal at one node. log_scale shifts all entries uniformly
/// and cancels under normalization.
struct BeliefVector {
  int node = 0;
  std::vector<double> values;
  double log_scale = 0.0;
};

std::vector<double> marginal(const BeliefVector& z);

/// Exact belief by exhaustive configuration enumeration. This is the ground
/// truth every inference backend is tested against. Guarded to at most 2^24
/// configurations.
BeliefVector brute_force_belief(const Graph& g, const PotentialSet& pots, int i);
std::map<int, BeliefVector> brute_force_all(const Graph& g, const PotentialSet& pots);

}  // namespace lcbp
