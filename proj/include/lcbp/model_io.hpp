#pragma once

#include <string>

#include <json.hpp>

#include "lcbp/local_conditioning.hpp"
#include "lcbp/runtime.hpp"

namespace lcbp {

using Json = nlohmann::json;

Json graph_to_json(const Graph& g);
Graph graph_from_json(const Json& j);

struct Model {
  Graph graph;
  PotentialSet potentials;
};

/// Model files carry either an "ising" block (expanded on load) or explicit
/// "phi"/"psi" tables, never both.
Model model_from_json(const Json& j);
Model load_model(const std::string& path);

Json ising_model_to_json(const Graph& g, const IsingParams& p);
Json explicit_model_to_json(const Graph& g, const PotentialSet& pots);

struct RunResults {
  std::string method;
  std::map<int, std::vector<double>> marginals;
  Json report;  // null unless the method produces one
};

Json results_to_json(const RunResults& r);
RunResults results_from_json(const Json& j);

Json report_to_json(const ComplexityReport& report);
Json messages_to_json(const std::vector<WireMessage>& messages);
Json explain_to_json(const AssociatedTree& t, const RelevantSets& rs,
                     const ComplexityReport& report);

Json load_json(const std::string& path);
void save_json(const Json& j, const std::string& path);

}  // namespace lcbp
