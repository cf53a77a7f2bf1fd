#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "keygraph/model.hpp"
#include "keygraph/rng.hpp"
#include "keygraph/sampler.hpp"

namespace keygraph::testing {

struct PairFrequency {
  std::uint64_t pairs = 0;
  std::uint64_t edges = 0;
  double expected = 0.0;  // alpha * p_ij

  double frequency() const { return static_cast<double>(edges) / static_cast<double>(pairs); }
  double standard_error() const {
    return std::sqrt(expected * (1.0 - expected) / static_cast<double>(pairs));
  }
  double z() const { return (frequency() - expected) / standard_error(); }
};

/// Per-pair edge frequency between a ring of size Ki and a ring of size Kj,
/// over independent two-node samples (one fresh stream each). With Ki != Kj
/// the two nodes get distinct classes with probability 1/2; only those
/// samples are counted, until `pairs` qualifying pairs are collected.
inline PairFrequency measure_pair_frequency(int Ki, int Kj, int P, double alpha,
                                            std::uint64_t pairs, std::uint64_t seed) {
  SchemeParameters params;
  params.n = 2;
  params.P = P;
  params.alpha = alpha;
  if (Ki == Kj) {
    params.mu = {1.0};
    params.K = {Ki};
  } else {
    params.mu = {0.5, 0.5};
    params.K = {std::min(Ki, Kj), std::max(Ki, Kj)};
  }
  PairFrequency result;
  result.expected = alpha * pairwise_edge_prob(Ki, Kj, P);
  IntersectionGraphSampler sampler;
  for (std::uint64_t trial = 0; result.pairs < pairs; ++trial) {
    RngStream stream = derive_trial_stream(seed, 0, trial);
    const SampledGraph g = sampler.sample(params, stream);
    if (Ki != Kj && g.nodes[0].class_index == g.nodes[1].class_index) continue;
    ++result.pairs;
    result.edges += g.graph.num_edges();
  }
  return result;
}

}  // namespace keygraph::testing
