// Command line front end: model generation, inference with every backend,
// result comparison, and cutset/tree inspection.

#include <cstdio>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "lcbp/model_io.hpp"

namespace {

using namespace lcbp;

std::string format_cycle(const std::vector<int>& cycle) {
  std::string out;
  for (std::size_t k = 0; k < cycle.size(); ++k) {
    if (k) out += "-";
    out += std::to_string(cycle[k]);
  }
  return out;
}

LoopCutset resolve_cutset(const Graph& g, const std::vector<int>& requested) {
  if (requested.empty()) return find_loop_cutset(g);
  LoopCutset cutset{requested};
  std::sort(cutset.nodes.begin(), cutset.nodes.end());
  cutset.nodes.erase(std::unique(cutset.nodes.begin(), cutset.nodes.end()),
                     cutset.nodes.end());
  if (!verify_loop_cutset(g, cutset.nodes)) {
    const Graph rest = remove_nodes(
        g, std::set<int>(cutset.nodes.begin(), cutset.nodes.end()));
    const auto cycles = find_cycles_basis(rest);
    throw std::runtime_error("cutset does not break all cycles; remaining cycle " +
                             format_cycle(cycles.front()));
  }
  return cutset;
}

std::vector<WireMessage> dump_to_wire(const AssociatedTree& t,
                                      const std::vector<MessageMatrix>& dump) {
  std::vector<WireMessage> out;
  out.reserve(dump.size());
  for (const auto& m : dump) out.push_back(to_wire(m, t.base(m.from), t.base(m.to)));
  return out;
}

int run_infer(const std::string& method, const std::string& model_path,
              const std::vector<int>& cutset_arg, const std::string& policy,
              std::uint64_t seed, const std::string& distributed, int workers,
              const std::string& dump_path, const std::string& out_path) {
  const Model model = load_model(model_path);
  if (!model.graph.connected()) {
    throw std::runtime_error("model graph must be a single connected component");
  }

  RunResults results;
  results.method = method;

  if (method == "brute") {
    for (const auto& [n, z] : brute_force_all(model.graph, model.potentials)) {
      results.marginals[n] = marginal(z);
    }
  } else if (method == "bp") {
    if (!is_acyclic(model.graph)) {
      const auto cycles = find_cycles_basis(model.graph);
      throw std::runtime_error("method 'bp' needs an acyclic network, but the model has "
                               "a cycle: " + format_cycle(cycles.front()));
    }
    for (const auto& [n, z] : run_tree_bp(model.graph, model.potentials)) {
      results.marginals[n] = marginal(z);
    }
  } else if (method == "conditioning" || method == "lc") {
    const LoopCutset cutset = resolve_cutset(model.graph, cutset_arg);
    const AssociatedTree tree =
        build_associated_tree(model.graph, cutset, merge_policy(policy));
    if (method == "conditioning") {
      auto run = run_conditioning(model.graph, model.potentials, tree, !dump_path.empty());
      results.marginals = std::move(run.marginals);
      if (!dump_path.empty()) {
        save_json(messages_to_json(dump_to_wire(tree, run.message_dump)), dump_path);
      }
    } else if (distributed.empty()) {
      auto run =
          run_local_conditioning(model.graph, model.potentials, tree, !dump_path.empty());
      results.marginals = std::move(run.marginals);
      results.report = report_to_json(run.report);
      if (!dump_path.empty()) {
        save_json(messages_to_json(dump_to_wire(tree, run.message_dump)), dump_path);
      }
    } else {
      const RelevantSets rs = compute_relevant_sets(tree);
      auto actors = setup_actors(model.graph, model.potentials, tree, rs);
      DistributedResult run = distributed == "sync"
                                  ? run_distributed_sync(actors, workers)
                                  : run_distributed_async(actors, seed);
      results.marginals = std::move(run.marginals);
      results.report =
          report_to_json(make_complexity_report(tree, rs, model.potentials.alphabet_size));
      if (!dump_path.empty()) save_json(messages_to_json(run.wire_log), dump_path);
    }
  }

  save_json(results_to_json(results), out_path);
  std::printf("%s: %zu marginals -> %s\n", method.c_str(), results.marginals.size(),
              out_path.c_str());
  return 0;
}

int run_compare(const std::string& path_a, const std::string& path_b, double tol) {
  const RunResults a = results_from_json(load_json(path_a));
  const RunResults b = results_from_json(load_json(path_b));
  if (a.marginals.size() != b.marginals.size()) {
    throw std::runtime_error("results cover different node sets");
  }
  double worst = 0.0;
  int worst_node = 0;
  for (const auto& [n, pa] : a.marginals) {
    auto it = b.marginals.find(n);
    if (it == b.marginals.end() || it->second.size() != pa.size()) {
      throw std::runtime_error("results cover different node sets");
    }
    double d = 0.0;
    for (std::size_t k = 0; k < pa.size(); ++k) {
      d = std::max(d, std::abs(pa[k] - it->second[k]));
    }
    std::printf("node %d: max diff %.3e\n", n, d);
    if (d > worst) {
      worst = d;
      worst_node = n;
    }
  }
  const bool pass = worst <= tol;
  std::printf("%s: max diff %.3e at node %d (tol %.3e)\n", pass ? "PASS" : "FAIL",
              worst, worst_node, tol);
  return pass ? 0 : 1;
}

int run_gen_grid(int rows, int cols, bool seeded, std::uint64_t seed,
                 const std::string& out_path) {
  const Graph g = build_grid(rows, cols);
  IsingParams p;
  if (seeded) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    for (int n : g.nodes()) p.alpha[n] = uniform(rng);
    for (const auto& e : g.edges()) p.theta[e] = uniform(rng);
  } else {
    for (int n : g.nodes()) p.alpha[n] = 0.1 * n;
    for (const auto& e : g.edges()) p.theta[e] = 0.2;
  }
  save_json(ising_model_to_json(g, p), out_path);
  std::printf("grid %dx%d -> %s\n", rows, cols, out_path.c_str());
  return 0;
}

int run_explain(const std::string& model_path, const std::vector<int>& cutset_arg,
                const std::string& policy, const std::string& out_path) {
  const Model model = load_model(model_path);
  if (!model.graph.connected()) {
    throw std::runtime_error("model graph must be a single connected component");
  }
  const LoopCutset cutset = resolve_cutset(model.graph, cutset_arg);
  const AssociatedTree tree =
      build_associated_tree(model.graph, cutset, merge_policy(policy));
  const RelevantSets rs = compute_relevant_sets(tree);
  const ComplexityReport report =
      make_complexity_report(tree, rs, model.potentials.alphabet_size);
  save_json(explain_to_json(tree, rs, report), out_path);
  std::printf("cutset size %zu, max relevant set %d -> %s\n", tree.cutset.size(),
              report.max_node_relevant, out_path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact marginal inference on cyclic undirected networks"};
  app.require_subcommand(1);

  std::string method, model_path, out_path, dump_path, policy = "canonical";
  std::string distributed;
  std::vector<int> cutset_arg;
  std::uint64_t seed = 0;
  int workers = 1;

  CLI::App* infer = app.add_subcommand("infer", "compute marginals for a model");
  infer->add_option("--method", method, "brute | bp | conditioning | lc")
      ->required()
      ->check(CLI::IsMember({"brute", "bp", "conditioning", "lc"}));
  infer->add_option("--model", model_path, "model JSON file")->required();
  infer->add_option("--cutset", cutset_arg, "explicit loop cutset node ids")
      ->delimiter(',');
  infer->add_option("--merge-policy", policy, "copy re-identification policy")
      ->check(CLI::IsMember(merge_policy_names()));
  infer->add_option("--seed", seed, "seed for the asynchronous scheduler");
  infer->add_option("--distributed", distributed,
                    "run lc on simulated node actors: sync | async")
      ->check(CLI::IsMember({"sync", "async"}));
  infer->add_option("--workers", workers, "worker threads for the sync scheduler")
      ->check(CLI::PositiveNumber);
  infer->add_option("--dump-messages", dump_path, "write all message matrices to a file");
  infer->add_option("--out", out_path, "results JSON file")->required();

  std::string path_a, path_b;
  double tol = 1e-10;
  CLI::App* compare = app.add_subcommand("compare", "diff two results files");
  compare->add_option("a", path_a)->required();
  compare->add_option("b", path_b)->required();
  compare->add_option("--tol", tol, "max allowed marginal difference");

  int rows = 0, cols = 0;
  CLI::App* gen = app.add_subcommand("gen-grid", "write a grid model");
  gen->add_option("--rows", rows)->required()->check(CLI::PositiveNumber);
  gen->add_option("--cols", cols)->required()->check(CLI::PositiveNumber);
  CLI::Option* seed_opt =
      gen->add_option("--ising-seed", seed, "random parameters from this seed "
                                            "(default: alpha_i = 0.1*i, theta = 0.2)");
  gen->add_option("--out", out_path, "model JSON file")->required();

  CLI::App* explain = app.add_subcommand("explain", "dump cutset, tree and relevant sets");
  explain->add_option("--model", model_path)->required();
  explain->add_option("--cutset", cutset_arg)->delimiter(',');
  explain->add_option("--merge-policy", policy)->check(CLI::IsMember(merge_policy_names()));
  explain->add_option("--out", out_path)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (infer->parsed()) {
      if (!distributed.empty() && method != "lc") {
        throw std::runtime_error("--distributed is only available for method 'lc'");
      }
      return run_infer(method, model_path, cutset_arg, policy, seed, distributed,
                       workers, dump_path, out_path);
    }
    if (compare->parsed()) return run_compare(path_a, path_b, tol);
    if (gen->parsed()) return run_gen_grid(rows, cols, seed_opt->count() > 0, seed, out_path);
    if (explain->parsed()) return run_explain(model_path, cutset_arg, policy, out_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
