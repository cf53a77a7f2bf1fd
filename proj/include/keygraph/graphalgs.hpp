#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "keygraph/graph.hpp"

namespace keygraph {

struct DegreeProfile {
  std::vector<int> degrees;
  int min_degree = 0;
  /// degree value -> number of nodes with exactly that degree
  std::map<int, int> degree_counts;

  int count(int degree) const {
    auto it = degree_counts.find(degree);
    return it == degree_counts.end() ? 0 : it->second;
  }
};

DegreeProfile degree_profile(const Graph& graph);

bool is_connected(const Graph& graph);

/// Connected, n >= 3 and free of cut vertices (linear-time lowpoint DFS).
bool is_biconnected(const Graph& graph);

/// Vertex connectivity decision with reusable scratch.
///
/// Order the vertices v_1..v_n with the k lowest-degree vertices first. With
/// n >= k + 1, the graph is k-connected iff every non-adjacent pair among
/// v_1..v_k has local connectivity at least k, and every later v_j has k
/// paths into {v_1..v_{j-1}} that share only v_j. If a separator C with
/// |C| < k exists, either two of v_1..v_k lie on different sides of it, or
/// the first vertex outside the component of v_1..v_k sees only earlier
/// vertices through C. Both counts are unit-capacity max flows on the
/// node-split digraph, stopped once they reach k, seeded greedily with short
/// disjoint paths. k = 2 is decided by the cut-vertex test alone, which also
/// screens every larger k.
class ConnectivityChecker {
 public:
  /// Requires n >= 2 and k >= 1 (std::invalid_argument otherwise).
  bool is_k_connected(const Graph& graph, int k);

  /// Number of internally vertex-disjoint s-t paths, capped at limit. s and t
  /// must be distinct and non-adjacent.
  int local_connectivity(const Graph& graph, int s, int t, int limit);

 private:
  void prepare(const Graph& graph);
  int pair_flow(const Graph& graph, int s, int t, int limit);
  int fan_flow(const Graph& graph, int s, int limit);
  int greedy_paths(const Graph& graph, int s, int t, int limit);
  int greedy_fan(const Graph& graph, int s, int limit);
  /// One augmenting path from s to t, or into the set when t < 0.
  bool augment(const Graph& graph, int s, int t);
  void set_arc(std::int64_t arc, std::uint8_t value);
  void set_used(int v, bool value);
  void set_sink_used(int v);
  void reset_flow();

  std::vector<std::int64_t> twin_;
  std::vector<std::uint8_t> flow_;
  std::vector<std::uint8_t> used_;
  std::vector<std::uint8_t> sink_used_;
  std::vector<std::uint8_t> in_set_;
  std::vector<std::int64_t> touched_arcs_;
  std::vector<int> touched_nodes_;

  std::vector<std::uint32_t> sink_mark_;
  std::uint32_t sink_epoch_ = 0;

  std::vector<std::uint32_t> seen_;
  std::uint32_t seen_epoch_ = 0;
  std::vector<int> parent_state_;
  std::vector<std::int64_t> parent_arc_;
  std::vector<int> queue_;
};

bool is_k_connected(const Graph& graph, int k);

/// Exhaustive vertex connectivity for n <= 12 (std::length_error beyond).
/// Returns n - 1 for complete graphs.
int brute_force_vertex_connectivity(const Graph& graph);

}  // namespace keygraph
