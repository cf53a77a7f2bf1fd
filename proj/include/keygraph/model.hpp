#pragma once

// Closed-form quantities of the heterogeneous key predistribution model
// intersected with an on/off channel model.

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace keygraph {

/// Absolute tolerance on sum(mu) == 1.
inline constexpr double kMuTolerance = 1e-12;

/// Full parameterization of K(n; mu, K, P) intersected with G(n; alpha).
/// Classes are indexed from zero; K must be nondecreasing in class index.
struct SchemeParameters {
  int n = 0;
  std::vector<double> mu;
  std::vector<int> K;
  int P = 0;
  double alpha = 1.0;

  int num_classes() const { return static_cast<int>(mu.size()); }

  /// Copy with mu divided by its sum. Only meaningful once validate()
  /// has accepted the parameters.
  SchemeParameters normalized() const;
};

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> advisories;

  bool ok() const { return errors.empty(); }
  bool scaling_advisory() const;
  bool full_channel_advisory() const;
};

inline constexpr const char* kAdvisoryScaling = "scaling-regime";
inline constexpr const char* kAdvisoryFullChannel = "full-channel";

ValidationReport validate(const SchemeParameters& params);

/// Probability that rings of sizes Ki and Kj drawn uniformly from a pool of
/// P keys share at least one key. Throws std::domain_error outside
/// 1 <= Ki, Kj <= P.
double pairwise_edge_prob(int Ki, int Kj, int P);

/// lambda_i = sum_j p_ij mu_j. Throws std::out_of_range for a bad index.
double mean_key_edge_prob(int class_index, const SchemeParameters& params);

/// Lambda_i = alpha * lambda_i.
double mean_intersection_edge_prob(int class_index,
                                   const SchemeParameters& params);

/// Right-hand side of the critical scaling, (log n + (k-1) log log n) / n.
double critical_scaling(int n, int k);

/// gamma = n * Lambda1 - log n - (k-1) log log n. Requires n >= 3.
double gamma_deviation(int n, int k, double Lambda1);

/// Inverse of gamma_deviation: the Lambda1 that produces gamma.
double lambda_for_gamma(int n, int k, double gamma);

struct KeyringSearch {
  int n = 0;
  int k = 1;
  double alpha = 1.0;
  std::vector<double> mu;
  /// K_j = K1 + offsets[j]; offsets[0] must be 0.
  std::vector<int> offsets;
  int P = 0;
  int K_lo = 1;
  int K_hi = 1;
};

/// Key-ring sizes for class-1 ring size K1 under the given offsets.
std::vector<int> keyrings_from_offsets(int K1, std::span<const int> offsets);

/// Smallest K1 in [K_lo, K_hi] with lambda1 > critical_scaling(n, k) / alpha,
/// found by ascending scan; nullopt when none qualifies. Throws
/// std::domain_error for malformed inputs (including an empty range).
std::optional<int> critical_min_keyring(const KeyringSearch& search);

/// K_min * K_avg / P with K_avg = sum_j mu_j K_j.
double smallness_ratio(const SchemeParameters& params);

struct ScalingDiagnostics {
  double lambda1 = 0.0;
  double Lambda1 = 0.0;
  double gamma = 0.0;
  std::optional<int> critical_K1;
  double smallness_ratio = 0.0;
};

}  // namespace keygraph
