#pragma once

// One realization of the inhomogeneous random key graph intersected with an
// Erdos-Renyi on/off channel graph.
//
// Draw order within a stream (fixed, part of the determinism contract):
//   1. class labels for nodes 0..n-1, one unit draw each;
//   2. key rings for nodes 0..n-1, K draws each (partial Fisher-Yates);
//   3. one channel draw per unordered pair {x, y}, x < y, lexicographic.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "keygraph/graph.hpp"
#include "keygraph/model.hpp"
#include "keygraph/rng.hpp"

namespace keygraph {

struct NodeAssignment {
  int class_index = 0;       // zero-based class
  std::vector<int> key_ring;  // sorted, distinct keys in [1, P]
};

struct SampledGraph {
  Graph graph;
  std::vector<NodeAssignment> nodes;
  /// Present only when sampled with retain_layers.
  std::optional<PairSet> key_layer;
  std::optional<PairSet> channel_layer;

  int num_nodes() const { return graph.num_nodes(); }
};

enum class OverlapMethod {
  kKeyIndex,      // per-trial inverted index key -> holders, one row at a time
  kSortedMerge,   // merge of the two sorted rings
  kPoolBitmask,   // AND of pool-indexed P-bit masks over the common word span
};

struct SampleOptions {
  bool retain_layers = false;
  OverlapMethod overlap = OverlapMethod::kKeyIndex;
};

/// Class labels drawn i.i.d. from mu (expects validated parameters).
std::vector<int> assign_classes(const SchemeParameters& params, RngStream& stream);

/// Uniform K-subsets of {1..P} by partial Fisher-Yates over a reusable index
/// array; the touched slots are swapped back after every draw so the array
/// stays the identity permutation between rings.
class KeyRingSampler {
 public:
  explicit KeyRingSampler(int P);

  int pool_size() const { return static_cast<int>(pool_.size()); }

  /// Writes a sorted ring of K distinct keys into out. Throws
  /// std::domain_error unless 1 <= K <= P.
  void sample_into(int K, RngStream& stream, std::vector<int>& out);

 private:
  std::vector<int> pool_;
  std::vector<std::uint32_t> swapped_with_;
};

std::vector<int> sample_key_ring(int K, int P, RngStream& stream);

/// Sorted-merge intersection test with early exit.
bool rings_intersect(std::span<const int> a, std::span<const int> b);

/// Reusable scratch for repeated sampling (one per worker thread).
class IntersectionGraphSampler {
 public:
  IntersectionGraphSampler() = default;

  SampledGraph sample(const SchemeParameters& params, RngStream& stream,
                      const SampleOptions& options = {});

 private:
  void build_key_index(int n, int P, const std::vector<NodeAssignment>& nodes);
  void build_bitmasks(int n, int P, const std::vector<NodeAssignment>& nodes);
  bool bitmask_intersect(int x, int y, const std::vector<NodeAssignment>& nodes) const;

  std::optional<KeyRingSampler> ring_sampler_;
  // kKeyIndex scratch
  std::vector<int> holder_offsets_;
  std::vector<int> holders_;
  std::vector<int> row_mark_;
  // kPoolBitmask scratch
  std::size_t words_per_node_ = 0;
  std::vector<std::uint64_t> masks_;
};

/// Convenience wrapper around a fresh IntersectionGraphSampler.
SampledGraph sample_intersection_graph(const SchemeParameters& params,
                                       RngStream& stream,
                                       const SampleOptions& options = {});

}  // namespace keygraph
