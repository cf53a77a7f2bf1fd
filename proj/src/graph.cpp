#include "keygraph/graph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace keygraph {

Graph::Graph(int n) : n_(n), offsets_(static_cast<std::size_t>(n) + 1, 0) {
  if (n < 0) throw std::invalid_argument("graph size must be nonnegative");
}

Graph Graph::from_edges(int n, std::vector<Edge> edges) {
  Graph g(n);
  for (auto& [x, y] : edges) {
    if (x < 0 || y < 0 || x >= n || y >= n) {
      throw std::invalid_argument("edge endpoint out of range");
    }
    if (x == y) throw std::invalid_argument("self-loop at vertex " + std::to_string(x));
    if (x > y) std::swap(x, y);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::vector<std::int64_t> degree(static_cast<std::size_t>(n), 0);
  for (const auto& [x, y] : edges) {
    ++degree[x];
    ++degree[y];
  }
  for (int v = 0; v < n; ++v) g.offsets_[v + 1] = g.offsets_[v] + degree[v];
  g.targets_.resize(2 * edges.size());
  std::vector<std::int64_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  // Edges are sorted with x < y, so every list receives its smaller
  // neighbors first, then its larger ones, each run in increasing order.
  for (const auto& [x, y] : edges) g.targets_[cursor[y]++] = x;
  for (const auto& [x, y] : edges) g.targets_[cursor[x]++] = y;
  return g;
}

Graph Graph::complete(int n) {
  std::vector<Edge> edges;
  for (int x = 0; x < n; ++x) {
    for (int y = x + 1; y < n; ++y) edges.emplace_back(x, y);
  }
  return from_edges(n, std::move(edges));
}

std::int64_t Graph::arc_index(int v, int w) const {
  const auto first = targets_.begin() + offsets_[v];
  const auto last = targets_.begin() + offsets_[v + 1];
  const auto it = std::lower_bound(first, last, w);
  if (it == last || *it != w) return -1;
  return it - targets_.begin();
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (int x = 0; x < n_; ++x) {
    for (int y : neighbors(x)) {
      if (x < y) out.emplace_back(x, y);
    }
  }
  return out;
}

PairSet::PairSet(int n)
    : n_(n), bits_(static_cast<std::size_t>(n) * (n > 0 ? n - 1 : 0) / 2, 0) {}

std::size_t PairSet::index(int x, int y) const {
  if (x > y) std::swap(x, y);
  if (x == y || x < 0 || y >= n_) throw std::out_of_range("invalid vertex pair");
  const auto xs = static_cast<std::size_t>(x);
  const auto ns = static_cast<std::size_t>(n_);
  return xs * (2 * ns - xs - 1) / 2 + static_cast<std::size_t>(y - x - 1);
}

std::size_t PairSet::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

void write_edge_list(std::ostream& out, const Graph& graph) {
  out << graph.num_nodes() << ' ' << graph.num_edges() << '\n';
  for (const auto& [x, y] : graph.edges()) out << x + 1 << ' ' << y + 1 << '\n';
}

Graph read_edge_list(std::istream& in) {
  std::string line;
  auto next_line = [&](std::size_t line_no) {
    if (!std::getline(in, line)) {
      throw std::runtime_error("edge list truncated at line " + std::to_string(line_no));
    }
    return std::istringstream(line);
  };

  long long n = -1, m = -1;
  {
    auto header = next_line(1);
    if (!(header >> n >> m) || n < 0 || m < 0) {
      throw std::runtime_error("edge list header must be \"n m\"");
    }
  }
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    auto row = next_line(static_cast<std::size_t>(i) + 2);
    long long x = 0, y = 0;
    if (!(row >> x >> y)) {
      throw std::runtime_error("malformed edge on line " + std::to_string(i + 2));
    }
    if (x < 1 || y < 1 || x > n || y > n || x == y) {
      throw std::runtime_error("invalid edge " + std::to_string(x) + " " +
                               std::to_string(y) + " on line " + std::to_string(i + 2));
    }
    edges.emplace_back(static_cast<int>(x - 1), static_cast<int>(y - 1));
  }
  return Graph::from_edges(static_cast<int>(n), std::move(edges));
}

}  // namespace keygraph
