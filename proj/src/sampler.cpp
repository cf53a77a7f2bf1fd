#include "keygraph/sampler.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace keygraph {

std::vector<int> assign_classes(const SchemeParameters& params, RngStream& stream) {
  const int r = params.num_classes();
  std::vector<double> cumulative(params.mu.size());
  std::partial_sum(params.mu.begin(), params.mu.end(), cumulative.begin());

  std::vector<int> labels(static_cast<std::size_t>(params.n));
  for (int& label : labels) {
    const double u = stream.next_unit();
    int c = 0;
    while (c < r - 1 && !(u < cumulative[c])) ++c;
    label = c;
  }
  return labels;
}

KeyRingSampler::KeyRingSampler(int P) {
  if (P < 1) throw std::domain_error("key pool size must be positive");
  pool_.resize(static_cast<std::size_t>(P));
  std::iota(pool_.begin(), pool_.end(), 1);
}

void KeyRingSampler::sample_into(int K, RngStream& stream, std::vector<int>& out) {
  const int P = pool_size();
  if (K < 1 || K > P) {
    throw std::domain_error("key-ring size " + std::to_string(K) +
                            " outside [1, " + std::to_string(P) + "]");
  }
  swapped_with_.resize(static_cast<std::size_t>(K));
  for (int t = 0; t < K; ++t) {
    const auto j = static_cast<std::uint32_t>(
        t + stream.uniform_below(static_cast<std::uint64_t>(P - t)));
    std::swap(pool_[t], pool_[j]);
    swapped_with_[t] = j;
  }
  out.assign(pool_.begin(), pool_.begin() + K);
  for (int t = K - 1; t >= 0; --t) std::swap(pool_[t], pool_[swapped_with_[t]]);
  std::sort(out.begin(), out.end());
}

std::vector<int> sample_key_ring(int K, int P, RngStream& stream) {
  KeyRingSampler sampler(P);
  std::vector<int> ring;
  sampler.sample_into(K, stream, ring);
  return ring;
}

bool rings_intersect(std::span<const int> a, std::span<const int> b) {
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      return true;
    }
  }
  return false;
}

void IntersectionGraphSampler::build_key_index(
    int n, int P, const std::vector<NodeAssignment>& nodes) {
  holder_offsets_.assign(static_cast<std::size_t>(P) + 2, 0);
  for (const auto& node : nodes) {
    for (int key : node.key_ring) ++holder_offsets_[key + 1];
  }
  std::partial_sum(holder_offsets_.begin(), holder_offsets_.end(), holder_offsets_.begin());
  holders_.resize(static_cast<std::size_t>(holder_offsets_.back()));
  std::vector<int> cursor(holder_offsets_.begin(), holder_offsets_.end() - 1);
  // Nodes are visited in increasing order, so each holder list is sorted.
  for (int v = 0; v < n; ++v) {
    for (int key : nodes[v].key_ring) holders_[cursor[key]++] = v;
  }
  row_mark_.assign(static_cast<std::size_t>(n), -1);
}

void IntersectionGraphSampler::build_bitmasks(
    int n, int P, const std::vector<NodeAssignment>& nodes) {
  words_per_node_ = (static_cast<std::size_t>(P) + 64) / 64;
  masks_.assign(words_per_node_ * static_cast<std::size_t>(n), 0);
  for (int v = 0; v < n; ++v) {
    std::uint64_t* mask = masks_.data() + words_per_node_ * v;
    for (int key : nodes[v].key_ring) mask[key >> 6] |= std::uint64_t{1} << (key & 63);
  }
}

bool IntersectionGraphSampler::bitmask_intersect(
    int x, int y, const std::vector<NodeAssignment>& nodes) const {
  const auto& rx = nodes[x].key_ring;
  const auto& ry = nodes[y].key_ring;
  const std::size_t first = static_cast<std::size_t>(std::max(rx.front(), ry.front())) >> 6;
  const std::size_t last = static_cast<std::size_t>(std::min(rx.back(), ry.back())) >> 6;
  const std::uint64_t* mx = masks_.data() + words_per_node_ * x;
  const std::uint64_t* my = masks_.data() + words_per_node_ * y;
  for (std::size_t w = first; w <= last && first <= last; ++w) {
    if ((mx[w] & my[w]) != 0) return true;
  }
  return false;
}

SampledGraph IntersectionGraphSampler::sample(const SchemeParameters& params,
                                              RngStream& stream,
                                              const SampleOptions& options) {
  const int n = params.n;
  const int P = params.P;
  if (!ring_sampler_ || ring_sampler_->pool_size() != P) ring_sampler_.emplace(P);

  SampledGraph out;
  out.nodes.resize(static_cast<std::size_t>(n));
  const std::vector<int> labels = assign_classes(params, stream);
  for (int v = 0; v < n; ++v) {
    out.nodes[v].class_index = labels[v];
    ring_sampler_->sample_into(params.K[labels[v]], stream, out.nodes[v].key_ring);
  }

  switch (options.overlap) {
    case OverlapMethod::kKeyIndex: build_key_index(n, P, out.nodes); break;
    case OverlapMethod::kPoolBitmask: build_bitmasks(n, P, out.nodes); break;
    case OverlapMethod::kSortedMerge: break;
  }
  auto overlap = [&](int x, int y) {
    switch (options.overlap) {
      case OverlapMethod::kKeyIndex: return row_mark_[y] == x;
      case OverlapMethod::kPoolBitmask: return bitmask_intersect(x, y, out.nodes);
      case OverlapMethod::kSortedMerge: break;
    }
    return rings_intersect(out.nodes[x].key_ring, out.nodes[y].key_ring);
  };

  if (options.retain_layers) {
    out.key_layer.emplace(n);
    out.channel_layer.emplace(n);
  }
  std::vector<Edge> edges;
  for (int x = 0; x < n; ++x) {
    if (options.overlap == OverlapMethod::kKeyIndex) {
      for (int key : out.nodes[x].key_ring) {
        for (int h = holder_offsets_[key]; h < holder_offsets_[key + 1]; ++h) {
          if (holders_[h] > x) row_mark_[holders_[h]] = x;
        }
      }
    }
    for (int y = x + 1; y < n; ++y) {
      const bool channel_on = stream.bernoulli(params.alpha);
      if (options.retain_layers) {
        const bool shares_key = overlap(x, y);
        out.key_layer->set(x, y, shares_key);
        out.channel_layer->set(x, y, channel_on);
        if (shares_key && channel_on) edges.emplace_back(x, y);
      } else if (channel_on && overlap(x, y)) {
        edges.emplace_back(x, y);
      }
    }
  }
  out.graph = Graph::from_edges(n, std::move(edges));
  return out;
}

SampledGraph sample_intersection_graph(const SchemeParameters& params,
                                       RngStream& stream,
                                       const SampleOptions& options) {
  IntersectionGraphSampler sampler;
  return sampler.sample(params, stream, options);
}

}  // namespace keygraph
