#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace keygraph {

using Edge = std::pair<int, int>;

/// Simple undirected graph on vertices [0, n) in compressed sparse row form.
/// Neighbor lists are sorted; no self-loops or parallel edges.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n);

  /// Builds from an arbitrary edge list. Duplicates (in either orientation)
  /// are merged; self-loops and out-of-range endpoints throw
  /// std::invalid_argument.
  static Graph from_edges(int n, std::vector<Edge> edges);

  static Graph complete(int n);

  int num_nodes() const { return n_; }
  std::size_t num_edges() const { return targets_.size() / 2; }

  std::span<const int> neighbors(int v) const {
    return {targets_.data() + offsets_[v],
            static_cast<std::size_t>(offsets_[v + 1] - offsets_[v])};
  }
  int degree(int v) const { return static_cast<int>(offsets_[v + 1] - offsets_[v]); }

  /// Position of arc v -> w in the flat arc array, or -1 if absent.
  std::int64_t arc_index(int v, int w) const;
  std::int64_t arc_begin(int v) const { return offsets_[v]; }
  int arc_target(std::int64_t arc) const { return targets_[arc]; }
  std::size_t num_arcs() const { return targets_.size(); }

  bool has_edge(int v, int w) const { return arc_index(v, w) >= 0; }

  /// Edges as (x, y) with x < y in lexicographic order.
  std::vector<Edge> edges() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  int n_ = 0;
  std::vector<std::int64_t> offsets_{0};
  std::vector<int> targets_;
};

/// Symmetric boolean relation over unordered vertex pairs.
class PairSet {
 public:
  PairSet() = default;
  explicit PairSet(int n);

  int num_nodes() const { return n_; }
  bool test(int x, int y) const { return bits_[index(x, y)] != 0; }
  void set(int x, int y, bool value = true) { bits_[index(x, y)] = value ? 1 : 0; }
  std::size_t count() const;

  friend bool operator==(const PairSet&, const PairSet&) = default;

 private:
  std::size_t index(int x, int y) const;

  int n_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// Plain-text edge list: a header line "n m" followed by m lines "x y" with
/// 1-based vertex ids, x < y, sorted lexicographically.
void write_edge_list(std::ostream& out, const Graph& graph);

/// Parses the edge-list format. Throws std::runtime_error on malformed input.
Graph read_edge_list(std::istream& in);

}  // namespace keygraph
