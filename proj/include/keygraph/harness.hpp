#pragma once

// Monte Carlo experiment engine: parameter grids over (alpha, K1), repeated
// independent samples per grid point, and aggregated counts of the events
// "minimum degree >= k" and "k-connected".

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "keygraph/model.hpp"

namespace keygraph {

inline constexpr const char* kArtifactName = "keygraph-sim";
inline constexpr const char* kArtifactVersion = "1.0.0";
inline constexpr std::uint64_t kDefaultMasterSeed = 20160717;

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
  int n = 500;
  int P = 10000;
  std::vector<double> mu{0.5, 0.5};
  std::vector<double> alphas{0.2, 0.4, 0.6, 0.8};
  /// K_j = K1 + offsets[j]; offsets[0] == 0.
  std::vector<int> offsets{0, 10};
  int K1_lo = 5;
  int K1_hi = 40;
  int K1_step = 1;
  std::vector<int> k_list{2};
  int trials = 200;
  std::uint64_t master_seed = kDefaultMasterSeed;
  bool retain_layers = false;
  std::string output_path;
  /// Free-form lines copied into the metadata sidecar.
  std::vector<std::string> notes;

  std::vector<int> K1_values() const;
  SchemeParameters params_at(double alpha, int K1) const;
};

/// Grid of the two-class experiment with k = 2 over four channel probabilities.
ExperimentConfig figure1_config();
/// Grid of the k in {4, 6, 8, 10} experiment at a single channel probability.
ExperimentConfig figure2_config(double alpha = 0.6);

/// Throws ConfigError describing the first problem found.
void validate_config(const ExperimentConfig& config);

/// Sorted, de-duplicated alphas and k values (the canonical grid order).
ExperimentConfig canonicalized(ExperimentConfig config);

/// Stable identifier of a grid point, used as the sub-stream index so that
/// adding or removing grid points never perturbs the samples of others.
std::uint64_t grid_point_key(double alpha, int K1);

struct ExperimentRecord {
  double alpha = 0.0;
  int K1 = 0;
  int k = 0;
  int n = 0;
  int P = 0;
  int trials = 0;
  int count_mindeg_ge_k = 0;
  int count_kconn = 0;
  int count_discrepancy = 0;
  double p_mindeg = 0.0;
  double p_kconn = 0.0;
  ScalingDiagnostics diagnostics;
  /// Mean number of nodes with degree exactly l, for l in [0, k).
  std::vector<double> mean_degree_counts;
};

/// Critical K1 over the configured K1 range for one (alpha, k) curve.
std::optional<int> critical_K1_for(const ExperimentConfig& config, double alpha, int k);

ScalingDiagnostics attach_diagnostics(const ExperimentConfig& config, double alpha,
                                      int K1, int k, std::optional<int> critical_K1);
ScalingDiagnostics attach_diagnostics(const ExperimentConfig& config, double alpha,
                                      int K1, int k);

struct RunOptions {
  int workers = 1;
};

/// Runs every grid point for config.trials samples. Records come back in
/// canonical order (alpha, then k, then K1, all ascending) and depend only on
/// the config, never on the worker count.
std::vector<ExperimentRecord> run_grid(const ExperimentConfig& config,
                                       const RunOptions& options = {});

struct TransitionWindow {
  double alpha = 0.0;
  int k = 0;
  /// Largest K1 below `upper` with p_kconn <= 0.05 (range start if none).
  std::optional<int> lower;
  /// Smallest K1 with p_kconn >= 0.95.
  std::optional<int> upper;
  double p_at_lower = 0.0;
  double p_at_upper = 0.0;
  std::optional<int> critical_K1;

  bool has_transition() const { return upper.has_value(); }
  /// Low end observed at or below 0.05 and high end at or above 0.95.
  bool complete() const;
  bool critical_inside() const;
};

inline constexpr double kWindowLowProbe = 0.05;
inline constexpr double kWindowHighProbe = 0.95;

std::vector<TransitionWindow> summarize(const std::vector<ExperimentRecord>& records);
std::string format_summary(const std::vector<TransitionWindow>& windows);

// ---- persistence -----------------------------------------------------------

inline constexpr const char* kCsvHeader =
    "alpha,K1,k,n,P,trials,count_mindeg_ge_k,count_kconn,count_discrepancy,"
    "p_mindeg,p_kconn,lambda1,Lambda1,gamma,critical_K1,smallness_ratio";

/// Parses the JSON config format; unknown keys throw ConfigError. Keys that
/// are absent keep the ExperimentConfig defaults.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::string& path);
std::string config_to_json(const ExperimentConfig& config);

/// FNV-1a 64 of the canonical config JSON, excluding output_path and notes.
std::uint64_t config_hash(const ExperimentConfig& config);

std::string results_csv(const std::vector<ExperimentRecord>& records);
std::string metadata_json(const ExperimentConfig& config);

/// Writes the CSV to path and the metadata to path + ".meta.json". Throws
/// std::runtime_error naming the path on failure.
void write_results(const ExperimentConfig& config,
                   const std::vector<ExperimentRecord>& records,
                   const std::string& path);

}  // namespace keygraph
