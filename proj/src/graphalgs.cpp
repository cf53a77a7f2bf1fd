#include "keygraph/graphalgs.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>
#include <string>

namespace keygraph {

namespace {

constexpr int kIn = 0;
constexpr int kOut = 1;

int state_of(int v, int side) { return 2 * v + side; }
int node_of(int state) { return state >> 1; }
int side_of(int state) { return state & 1; }

}  // namespace

DegreeProfile degree_profile(const Graph& graph) {
  DegreeProfile profile;
  const int n = graph.num_nodes();
  profile.degrees.resize(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    profile.degrees[v] = graph.degree(v);
    ++profile.degree_counts[profile.degrees[v]];
  }
  profile.min_degree =
      n == 0 ? 0 : *std::min_element(profile.degrees.begin(), profile.degrees.end());
  return profile;
}

bool is_connected(const Graph& graph) {
  const int n = graph.num_nodes();
  if (n <= 1) return true;
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(n), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w : graph.neighbors(v)) {
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == n;
}

bool is_biconnected(const Graph& graph) {
  const int n = graph.num_nodes();
  if (n < 3) return false;
  std::vector<int> discovery(static_cast<std::size_t>(n), -1);
  std::vector<int> low(static_cast<std::size_t>(n), 0);
  struct Frame {
    int v;
    int parent;
    std::size_t next;
  };
  std::vector<Frame> stack;
  stack.push_back({0, -1, 0});
  discovery[0] = low[0] = 0;
  int time = 1;
  int root_children = 0;
  while (!stack.empty()) {
    Frame& top = stack.back();
    const auto nbrs = graph.neighbors(top.v);
    if (top.next < nbrs.size()) {
      const int w = nbrs[top.next++];
      if (discovery[w] < 0) {
        discovery[w] = low[w] = time++;
        if (top.v == 0) ++root_children;
        stack.push_back({w, top.v, 0});
      } else if (w != top.parent) {
        low[top.v] = std::min(low[top.v], discovery[w]);
      }
      continue;
    }
    const int v = top.v;
    const int parent = top.parent;
    stack.pop_back();
    if (parent < 0) continue;
    low[parent] = std::min(low[parent], low[v]);
    // A non-root parent is a cut vertex when v's subtree cannot climb above it.
    if (parent != 0 && low[v] >= discovery[parent]) return false;
  }
  if (time < n) return false;
  return root_children == 1;
}

void ConnectivityChecker::prepare(const Graph& graph) {
  const int n = graph.num_nodes();
  const std::size_t arcs = graph.num_arcs();
  twin_.resize(arcs);
  for (int v = 0; v < n; ++v) {
    std::int64_t e = graph.arc_begin(v);
    for (int w : graph.neighbors(v)) twin_[e++] = graph.arc_index(w, v);
  }
  flow_.assign(arcs, 0);
  used_.assign(static_cast<std::size_t>(n), 0);
  sink_used_.assign(static_cast<std::size_t>(n), 0);
  in_set_.assign(static_cast<std::size_t>(n), 0);
  touched_arcs_.clear();
  touched_nodes_.clear();
  sink_mark_.assign(static_cast<std::size_t>(n), 0);
  sink_epoch_ = 0;
  seen_.assign(2 * static_cast<std::size_t>(n), 0);
  seen_epoch_ = 0;
  parent_state_.resize(2 * static_cast<std::size_t>(n));
  parent_arc_.resize(2 * static_cast<std::size_t>(n));
}

void ConnectivityChecker::set_arc(std::int64_t arc, std::uint8_t value) {
  flow_[arc] = value;
  touched_arcs_.push_back(arc);
}

void ConnectivityChecker::set_used(int v, bool value) {
  used_[v] = value ? 1 : 0;
  touched_nodes_.push_back(v);
}

void ConnectivityChecker::set_sink_used(int v) {
  sink_used_[v] = 1;
  touched_nodes_.push_back(v);
}

void ConnectivityChecker::reset_flow() {
  for (std::int64_t arc : touched_arcs_) flow_[arc] = 0;
  for (int v : touched_nodes_) used_[v] = sink_used_[v] = 0;
  touched_arcs_.clear();
  touched_nodes_.clear();
}

int ConnectivityChecker::greedy_paths(const Graph& graph, int s, int t, int limit) {
  if (++sink_epoch_ == 0) {
    std::fill(sink_mark_.begin(), sink_mark_.end(), 0);
    sink_epoch_ = 1;
  }
  for (int w : graph.neighbors(t)) sink_mark_[w] = sink_epoch_;

  int found = 0;
  // s - c - t through common neighbors.
  std::int64_t e = graph.arc_begin(s);
  for (int c : graph.neighbors(s)) {
    if (found == limit) return found;
    if (sink_mark_[c] == sink_epoch_) {
      set_arc(e, 1);
      set_used(c, true);
      set_arc(graph.arc_index(c, t), 1);
      ++found;
    }
    ++e;
  }
  // s - a - b - t, first fit.
  e = graph.arc_begin(s);
  for (int a : graph.neighbors(s)) {
    if (found == limit) return found;
    if (!used_[a]) {
      std::int64_t f = graph.arc_begin(a);
      for (int b : graph.neighbors(a)) {
        if (b != s && !used_[b] && sink_mark_[b] == sink_epoch_) {
          set_arc(e, 1);
          set_used(a, true);
          set_arc(f, 1);
          set_used(b, true);
          set_arc(graph.arc_index(b, t), 1);
          ++found;
          break;
        }
        ++f;
      }
    }
    ++e;
  }
  return found;
}

int ConnectivityChecker::greedy_fan(const Graph& graph, int s, int limit) {
  int found = 0;
  // s - a with a in the set.
  std::int64_t e = graph.arc_begin(s);
  for (int a : graph.neighbors(s)) {
    if (found == limit) return found;
    if (in_set_[a]) {
      set_arc(e, 1);
      set_used(a, true);
      set_sink_used(a);
      ++found;
    }
    ++e;
  }
  // s - c - a, first fit.
  e = graph.arc_begin(s);
  for (int c : graph.neighbors(s)) {
    if (found == limit) return found;
    if (!used_[c]) {
      std::int64_t f = graph.arc_begin(c);
      for (int a : graph.neighbors(c)) {
        if (a != s && !used_[a] && in_set_[a]) {
          set_arc(e, 1);
          set_used(c, true);
          set_arc(f, 1);
          set_used(a, true);
          set_sink_used(a);
          ++found;
          break;
        }
        ++f;
      }
    }
    ++e;
  }
  return found;
}

bool ConnectivityChecker::augment(const Graph& graph, int s, int t) {
  if (++seen_epoch_ == 0) {
    std::fill(seen_.begin(), seen_.end(), 0);
    seen_epoch_ = 1;
  }
  const int start = state_of(s, kOut);
  // t < 0 selects the fan target: the out side of any set vertex whose arc
  // to the virtual sink is still free.
  const int target = t >= 0 ? state_of(t, kIn) : -1;
  auto is_target = [&](int state) {
    if (target >= 0) return state == target;
    const int v = node_of(state);
    return side_of(state) == kOut && in_set_[v] && !sink_used_[v];
  };
  queue_.clear();
  queue_.push_back(start);
  seen_[start] = seen_epoch_;

  int reached = -1;
  auto visit = [&](int from, int to, std::int64_t arc) {
    if (seen_[to] == seen_epoch_) return false;
    seen_[to] = seen_epoch_;
    parent_state_[to] = from;
    parent_arc_[to] = arc;
    if (is_target(to)) {
      reached = to;
      return true;
    }
    queue_.push_back(to);
    return false;
  };

  for (std::size_t head = 0; head < queue_.size() && reached < 0; ++head) {
    const int state = queue_[head];
    const int v = node_of(state);
    std::int64_t e = graph.arc_begin(v);
    if (side_of(state) == kOut) {
      for (int b : graph.neighbors(v)) {
        if (flow_[e] == 0 && b != s && visit(state, state_of(b, kIn), e)) break;
        ++e;
      }
      if (reached < 0 && v != s && used_[v]) visit(state, state_of(v, kIn), -1);
    } else {
      if (!used_[v] && visit(state, state_of(v, kOut), -1)) break;
      for (int a : graph.neighbors(v)) {
        const std::int64_t back = twin_[e];
        if (flow_[back] == 1 && visit(state, state_of(a, kOut), back)) break;
        ++e;
      }
    }
  }
  if (reached < 0) return false;

  if (target < 0) set_sink_used(node_of(reached));
  for (int cur = reached; cur != start;) {
    const int prev = parent_state_[cur];
    const std::int64_t arc = parent_arc_[cur];
    if (node_of(prev) == node_of(cur)) {
      set_used(node_of(cur), side_of(cur) == kOut);
    } else {
      set_arc(arc, side_of(prev) == kOut ? 1 : 0);
    }
    cur = prev;
  }
  return true;
}

int ConnectivityChecker::local_connectivity(const Graph& graph, int s, int t, int limit) {
  const int n = graph.num_nodes();
  if (s < 0 || t < 0 || s >= n || t >= n || s == t || graph.has_edge(s, t)) {
    throw std::invalid_argument("local_connectivity needs distinct non-adjacent vertices");
  }
  prepare(graph);
  return pair_flow(graph, s, t, limit);
}

int ConnectivityChecker::pair_flow(const Graph& graph, int s, int t, int limit) {
  int flow = greedy_paths(graph, s, t, limit);
  while (flow < limit && augment(graph, s, t)) ++flow;
  reset_flow();
  return flow;
}

int ConnectivityChecker::fan_flow(const Graph& graph, int s, int limit) {
  int flow = greedy_fan(graph, s, limit);
  while (flow < limit && augment(graph, s, -1)) ++flow;
  reset_flow();
  return flow;
}

bool ConnectivityChecker::is_k_connected(const Graph& graph, int k) {
  const int n = graph.num_nodes();
  if (n < 2) throw std::invalid_argument("is_k_connected requires n >= 2");
  if (k < 1) throw std::invalid_argument("is_k_connected requires k >= 1");
  if (n < k + 1) return false;
  for (int v = 0; v < n; ++v) {
    if (graph.degree(v) < k) return false;
  }
  if (k == 1) return is_connected(graph);
  if (!is_biconnected(graph)) return false;
  if (k == 2) return true;

  prepare(graph);
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](int a, int b) {
    return graph.degree(a) != graph.degree(b) ? graph.degree(a) < graph.degree(b) : a < b;
  });

  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      const int u = order[i], w = order[j];
      if (!graph.has_edge(u, w) && pair_flow(graph, u, w, k) < k) return false;
    }
  }
  for (int i = 0; i < k; ++i) in_set_[order[i]] = 1;
  for (int j = k; j < n; ++j) {
    const int v = order[j];
    if (fan_flow(graph, v, k) < k) return false;
    in_set_[v] = 1;
  }
  return true;
}

bool is_k_connected(const Graph& graph, int k) {
  ConnectivityChecker checker;
  return checker.is_k_connected(graph, k);
}

int brute_force_vertex_connectivity(const Graph& graph) {
  const int n = graph.num_nodes();
  if (n > 12) {
    throw std::length_error("brute-force vertex connectivity limited to n <= 12, got " +
                            std::to_string(n));
  }
  if (graph.num_edges() == static_cast<std::size_t>(n) * (n > 0 ? n - 1 : 0) / 2) {
    return n > 0 ? n - 1 : 0;
  }
  std::vector<std::uint32_t> adj(static_cast<std::size_t>(n), 0);
  for (int v = 0; v < n; ++v) {
    for (int w : graph.neighbors(v)) adj[v] |= 1u << w;
  }
  const std::uint32_t all = (1u << n) - 1;

  auto remainder_connected = [&](std::uint32_t removed) {
    const std::uint32_t alive = all & ~removed;
    std::uint32_t reached = alive & (~alive + 1);  // lowest alive vertex
    std::uint32_t frontier = reached;
    while (frontier != 0) {
      const int v = std::countr_zero(frontier);
      frontier &= frontier - 1;
      const std::uint32_t fresh = adj[v] & alive & ~reached;
      reached |= fresh;
      frontier |= fresh;
    }
    return reached == alive;
  };

  for (int size = 0; size <= n - 2; ++size) {
    for (std::uint32_t removed = 0; removed <= all; ++removed) {
      if (std::popcount(removed) == size && !remainder_connected(removed)) return size;
    }
  }
  return n - 1;
}

}  // namespace keygraph
