#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "keygraph/graph.hpp"

namespace keygraph::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitSweepFailed = 1;
inline constexpr int kExitBadConfig = 2;
inline constexpr int kExitInternal = 3;

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct OracleSweepResult {
  int graphs = 0;
  int decisions = 0;
  int disagreements = 0;
  /// Edge list of the first disagreeing graph, if any.
  std::string first_failure;
};

/// Random small graphs (n in [4, 9]) from a mix of Erdos-Renyi densities,
/// small-pool intersection samples and structured graphs; compares the
/// flow-based k-connectivity decision with brute-force vertex connectivity
/// for every k in [1, n-1].
OracleSweepResult run_oracle_sweep(std::uint64_t seed, int count);

/// Compares both procedures on one graph (n <= 12). Returns the number of
/// disagreeing k values.
int check_graph_against_oracle(const Graph& graph, int* decisions = nullptr);

}  // namespace keygraph::cli
