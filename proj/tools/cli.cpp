#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "keygraph/graphalgs.hpp"
#include "keygraph/harness.hpp"
#include "keygraph/model.hpp"
#include "keygraph/rng.hpp"
#include "keygraph/sampler.hpp"

namespace keygraph::cli {

namespace {

struct Flags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<int> n;
  std::optional<int> P;
  std::vector<double> alphas;
  std::vector<int> ks;
  std::string K1_range;
  std::string out_path;
  std::optional<int> workers;
  bool retain_layers = false;
  int count = 500;
  std::string graph_path;
  int trial = 0;
};

void add_common_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config_path, "JSON experiment config");
  cmd->add_option("--seed", f.seed, "master seed (u64)");
  cmd->add_option("--trials", f.trials, "samples per grid point")->check(CLI::PositiveNumber);
  cmd->add_option("--n", f.n, "number of nodes");
  cmd->add_option("--P", f.P, "key pool size");
  cmd->add_option("--alpha", f.alphas, "channel-on probability (repeatable)")
      ->allow_extra_args(false);
  cmd->add_option("--k", f.ks, "target degree / connectivity (repeatable)")
      ->allow_extra_args(false);
  cmd->add_option("--K1", f.K1_range, "K1 range LO:HI[:STEP]");
  cmd->add_option("--out", f.out_path, "output path");
  cmd->add_option("--workers", f.workers, "worker threads (default $KEYGRAPH_SIM_WORKERS)")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--retain-layers", f.retain_layers, "keep key and channel layers per sample");
}

void parse_K1_range(const std::string& text, ExperimentConfig& config) {
  std::vector<int> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("--K1 expects LO:HI[:STEP], got \"" + text + "\"");
    }
  }
  if (parts.size() < 2 || parts.size() > 3) {
    throw ConfigError("--K1 expects LO:HI[:STEP], got \"" + text + "\"");
  }
  config.K1_lo = parts[0];
  config.K1_hi = parts[1];
  config.K1_step = parts.size() == 3 ? parts[2] : 1;
}

ExperimentConfig build_config(const Flags& f, ExperimentConfig base) {
  ExperimentConfig config = f.config_path.empty() ? std::move(base) : load_config(f.config_path);
  if (f.seed) config.master_seed = *f.seed;
  if (f.trials) config.trials = *f.trials;
  if (f.n) config.n = *f.n;
  if (f.P) config.P = *f.P;
  if (!f.alphas.empty()) config.alphas = f.alphas;
  if (!f.ks.empty()) config.k_list = f.ks;
  if (!f.K1_range.empty()) parse_K1_range(f.K1_range, config);
  if (f.retain_layers) config.retain_layers = true;
  if (!f.out_path.empty()) config.output_path = f.out_path;
  return canonicalized(std::move(config));
}

int resolve_workers(const Flags& f) {
  if (f.workers) return *f.workers;
  if (const char* env = std::getenv("KEYGRAPH_SIM_WORKERS"); env && *env) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (*end != '\0' || value < 1 || value > 4096) {
      throw ConfigError(std::string("KEYGRAPH_SIM_WORKERS must be a positive integer, got \"") +
                        env + "\"");
    }
    return static_cast<int>(value);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void print_config_header(std::ostream& out, const ExperimentConfig& c) {
  out << "n=" << c.n << " P=" << c.P << " mu=(";
  for (std::size_t i = 0; i < c.mu.size(); ++i) out << (i ? "," : "") << c.mu[i];
  out << ") offsets=(";
  for (std::size_t i = 0; i < c.offsets.size(); ++i) out << (i ? "," : "") << c.offsets[i];
  out << ") K1=" << c.K1_lo << ":" << c.K1_hi << ":" << c.K1_step << " trials=" << c.trials
      << " seed=" << c.master_seed << "\n";
  for (const auto& note : c.notes) out << "note: " << note << "\n";
}

int cmd_threshold(const Flags& f, std::ostream& out) {
  const ExperimentConfig config = build_config(f, figure1_config());
  validate_config(config);
  print_config_header(out, config);
  char line[256];
  std::snprintf(line, sizeof line, "%-8s %-4s %-12s %-14s %-14s %-12s %-10s\n", "alpha", "k",
                "critical_K1", "lambda1", "Lambda1", "gamma", "K_min*K_avg/P");
  out << line;
  for (double alpha : config.alphas) {
    for (int k : config.k_list) {
      const std::optional<int> crit = critical_K1_for(config, alpha, k);
      if (!crit) {
        std::snprintf(line, sizeof line, "%-8g %-4d %-12s %-14s %-14s %-12s %-10s\n", alpha, k,
                      "none", "-", "-", "-", "-");
      } else {
        const ScalingDiagnostics d = attach_diagnostics(config, alpha, *crit, k, crit);
        std::snprintf(line, sizeof line, "%-8g %-4d %-12d %-14.8f %-14.8f %-12.6f %-10.6f\n",
                      alpha, k, *crit, d.lambda1, d.Lambda1, d.gamma, d.smallness_ratio);
      }
      out << line;
    }
  }
  return kExitOk;
}

int cmd_run(const Flags& f, ExperimentConfig base, const std::string& default_out,
            std::ostream& out) {
  ExperimentConfig config = build_config(f, std::move(base));
  if (config.output_path.empty()) config.output_path = default_out;
  validate_config(config);
  const int workers = resolve_workers(f);
  print_config_header(out, config);
  const std::vector<ExperimentRecord> records = run_grid(config, RunOptions{workers});
  write_results(config, records, config.output_path);
  out << format_summary(summarize(records));
  out << "wrote " << records.size() << " rows to " << config.output_path << " (metadata: "
      << config.output_path << ".meta.json)\n";
  return kExitOk;
}

int cmd_validate_oracle(const Flags& f, std::ostream& out, std::ostream& err) {
  if (!f.graph_path.empty()) {
    std::ifstream in(f.graph_path);
    if (!in) throw ConfigError("cannot open graph file: " + f.graph_path);
    Graph g;
    try {
      g = read_edge_list(in);
    } catch (const std::runtime_error& e) {
      throw ConfigError(f.graph_path + ": " + e.what());
    }
    if (g.num_nodes() < 2 || g.num_nodes() > 12) {
      throw ConfigError("oracle check needs 2 <= n <= 12, got n = " +
                        std::to_string(g.num_nodes()));
    }
    int decisions = 0;
    const int bad = check_graph_against_oracle(g, &decisions);
    out << "kappa=" << brute_force_vertex_connectivity(g) << " decisions=" << decisions
        << " disagreements=" << bad << (bad ? " FAIL" : " PASS") << "\n";
    if (bad) write_edge_list(err, g);
    return bad ? kExitSweepFailed : kExitOk;
  }
  if (f.count < 1) throw ConfigError("--count must be at least 1");
  const std::uint64_t seed = f.seed.value_or(kDefaultMasterSeed);
  const OracleSweepResult result = run_oracle_sweep(seed, f.count);
  out << "oracle sweep: graphs=" << result.graphs << " decisions=" << result.decisions
      << " disagreements=" << result.disagreements
      << (result.disagreements ? " FAIL" : " PASS") << "\n";
  if (result.disagreements) {
    err << "first disagreeing graph:\n" << result.first_failure;
    return kExitSweepFailed;
  }
  return kExitOk;
}

int cmd_dump_graph(const Flags& f, std::ostream& out) {
  const ExperimentConfig config = build_config(f, figure1_config());
  validate_config(config);
  if (f.trial < 0) throw ConfigError("--trial must be nonnegative");
  const double alpha = config.alphas.front();
  const int K1 = config.K1_lo;
  RngStream stream = derive_trial_stream(config.master_seed, grid_point_key(alpha, K1),
                                         static_cast<std::uint64_t>(f.trial));
  const SampledGraph sample =
      sample_intersection_graph(config.params_at(alpha, K1).normalized(), stream);
  if (f.out_path.empty()) {
    write_edge_list(out, sample.graph);
  } else {
    std::ofstream file(f.out_path, std::ios::binary | std::ios::trunc);
    if (!file) throw std::runtime_error("cannot open output file for writing: " + f.out_path);
    write_edge_list(file, sample.graph);
    if (!file) throw std::runtime_error("failed writing output file: " + f.out_path);
  }
  return kExitOk;
}

Graph structured_graph(int n, RngStream& rng) {
  std::vector<Edge> edges;
  switch (rng.uniform_below(4)) {
    case 0:
      return Graph::complete(n);
    case 1:
      for (int v = 0; v < n; ++v) edges.emplace_back(v, (v + 1) % n);
      break;
    case 2: {
      const int a = 1 + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n - 1)));
      for (int x = 0; x < a; ++x) {
        for (int y = a; y < n; ++y) edges.emplace_back(x, y);
      }
      break;
    }
    default: {
      // Two cliques overlapping in `shared` vertices: connectivity == shared.
      const int shared = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n - 2)));
      const int split = (n + shared) / 2;
      for (int x = 0; x < split; ++x) {
        for (int y = x + 1; y < split; ++y) edges.emplace_back(x, y);
      }
      for (int x = split - shared; x < n; ++x) {
        for (int y = x + 1; y < n; ++y) edges.emplace_back(x, y);
      }
      break;
    }
  }
  for (int x = 0; x < n; ++x) {
    for (int y = x + 1; y < n; ++y) {
      if (rng.bernoulli(0.08)) edges.emplace_back(x, y);
    }
  }
  return Graph::from_edges(n, std::move(edges));
}

Graph random_oracle_graph(std::uint64_t seed, int index) {
  RngStream rng = derive_trial_stream(seed, 0x6f7261636c65ULL, static_cast<std::uint64_t>(index));
  const int n = 4 + static_cast<int>(rng.uniform_below(6));
  std::vector<Edge> edges;
  switch (index % 4) {
    case 0:
    case 2: {
      const double p = index % 4 == 0 ? 0.15 + 0.6 * rng.next_unit() : 0.6 + 0.4 * rng.next_unit();
      for (int x = 0; x < n; ++x) {
        for (int y = x + 1; y < n; ++y) {
          if (rng.bernoulli(p)) edges.emplace_back(x, y);
        }
      }
      return Graph::from_edges(n, std::move(edges));
    }
    case 1: {
      const int K1 = 1 + static_cast<int>(rng.uniform_below(3));
      const int K2 = K1 + static_cast<int>(rng.uniform_below(3));
      const int P = K2 + 1 + static_cast<int>(rng.uniform_below(10));
      SchemeParameters params{n, {0.5, 0.5}, {K1, K2}, P, 0.5 + 0.5 * rng.next_unit()};
      return sample_intersection_graph(params, rng).graph;
    }
    default:
      return structured_graph(n, rng);
  }
}

}  // namespace

int check_graph_against_oracle(const Graph& graph, int* decisions) {
  const int kappa = brute_force_vertex_connectivity(graph);
  ConnectivityChecker checker;
  int bad = 0;
  for (int k = 1; k <= graph.num_nodes() - 1; ++k) {
    if (checker.is_k_connected(graph, k) != (kappa >= k)) ++bad;
    if (decisions) ++*decisions;
  }
  return bad;
}

OracleSweepResult run_oracle_sweep(std::uint64_t seed, int count) {
  OracleSweepResult result;
  for (int i = 0; i < count; ++i) {
    const Graph g = random_oracle_graph(seed, i);
    ++result.graphs;
    const int bad = check_graph_against_oracle(g, &result.decisions);
    if (bad && result.disagreements == 0) {
      std::ostringstream os;
      write_edge_list(os, g);
      result.first_failure = os.str();
    }
    result.disagreements += bad;
  }
  return result;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Monte Carlo simulator for k-connectivity of heterogeneous key graphs "
               "under on/off channels"};
  app.require_subcommand(1);
  Flags f;

  auto* threshold = app.add_subcommand("threshold", "critical K1 and scaling diagnostics");
  auto* simulate = app.add_subcommand("simulate", "run an experiment grid");
  auto* figure1 = app.add_subcommand("figure1", "2-connectivity grid over four alphas");
  auto* figure2 = app.add_subcommand("figure2", "k-connectivity grid for k = 4, 6, 8, 10");
  auto* oracle = app.add_subcommand("validate-oracle", "max-flow vs brute-force sweep");
  auto* dump = app.add_subcommand("dump-graph", "write one sampled graph as an edge list");
  for (auto* cmd : {threshold, simulate, figure1, figure2, oracle, dump}) add_common_flags(cmd, f);
  oracle->add_option("--count", f.count, "number of random graphs");
  oracle->add_option("--graph", f.graph_path, "check a single edge-list file instead");
  dump->add_option("--trial", f.trial, "trial index of the first grid point");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitBadConfig;
  }

  try {
    if (threshold->parsed()) return cmd_threshold(f, out);
    if (simulate->parsed()) return cmd_run(f, figure1_config(), "results.csv", out);
    if (figure1->parsed()) return cmd_run(f, figure1_config(), "figure1.csv", out);
    if (figure2->parsed()) {
      // A single --alpha sets the channel probability of the default grid.
      const double alpha = f.alphas.size() == 1 ? f.alphas.front() : 0.6;
      return cmd_run(f, figure2_config(alpha), "figure2.csv", out);
    }
    if (oracle->parsed()) return cmd_validate_oracle(f, out, err);
    if (dump->parsed()) return cmd_dump_graph(f, out);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitBadConfig;
}

}  // namespace keygraph::cli
