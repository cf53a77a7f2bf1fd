#include "keygraph/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace keygraph {

namespace {

double mu_sum(const std::vector<double>& mu) {
  return std::accumulate(mu.begin(), mu.end(), 0.0);
}

void require_loglog_defined(int n) {
  if (n < 3) {
    throw std::domain_error("log log n requires n >= 3, got n = " +
                            std::to_string(n));
  }
}

}  // namespace

SchemeParameters SchemeParameters::normalized() const {
  SchemeParameters out = *this;
  const double total = mu_sum(mu);
  if (total > 0.0) {
    for (double& m : out.mu) m /= total;
  }
  return out;
}

bool ValidationReport::scaling_advisory() const {
  return std::find(advisories.begin(), advisories.end(), kAdvisoryScaling) !=
         advisories.end();
}

bool ValidationReport::full_channel_advisory() const {
  return std::find(advisories.begin(), advisories.end(),
                   kAdvisoryFullChannel) != advisories.end();
}

ValidationReport validate(const SchemeParameters& params) {
  ValidationReport report;
  auto error = [&](const std::string& what) { report.errors.push_back(what); };

  if (params.n < 2) error("n must be at least 2 (got " + std::to_string(params.n) + ")");
  if (params.mu.empty()) error("mu must contain at least one class");
  if (params.mu.size() != params.K.size()) {
    error("mu and K have different lengths (" + std::to_string(params.mu.size()) +
          " vs " + std::to_string(params.K.size()) + ")");
  }
  for (std::size_t i = 0; i < params.mu.size(); ++i) {
    if (!(params.mu[i] > 0.0)) {
      error("mu[" + std::to_string(i) + "] must be positive");
    }
  }
  if (!params.mu.empty()) {
    const double total = mu_sum(params.mu);
    if (!(std::fabs(total - 1.0) <= kMuTolerance)) {
      std::ostringstream os;
      os << "class probabilities sum to " << total << ", expected 1";
      error(os.str());
    }
  }
  if (!std::is_sorted(params.K.begin(), params.K.end())) {
    error("key-ring sizes K must be nondecreasing");
  }
  if (params.P < 1) error("key pool size P must be positive");
  if (!params.K.empty()) {
    const int k_min = *std::min_element(params.K.begin(), params.K.end());
    const int k_max = *std::max_element(params.K.begin(), params.K.end());
    if (k_min < 1) error("every key-ring size must be at least 1");
    if (k_max > params.P) error("key-ring size exceeds pool size P");
  }
  if (!(params.alpha > 0.0 && params.alpha <= 1.0)) {
    error("alpha must lie in (0, 1]");
  }

  if (report.ok()) {
    if (!(params.K.front() >= 2 && 2LL * params.K.back() <= params.P)) {
      report.advisories.emplace_back(kAdvisoryScaling);
    }
    if (params.alpha == 1.0) report.advisories.emplace_back(kAdvisoryFullChannel);
  }
  return report;
}

double pairwise_edge_prob(int Ki, int Kj, int P) {
  if (P < 1 || Ki < 1 || Kj < 1 || Ki > P || Kj > P) {
    throw std::domain_error("pairwise_edge_prob requires 1 <= Ki, Kj <= P");
  }
  if (Ki + Kj > P) return 1.0;
  // C(P-Ki, Kj) / C(P, Kj) as a product of factors in (0, 1].
  double miss = 1.0;
  for (int l = 0; l < Kj; ++l) {
    miss *= static_cast<double>(P - Ki - l) / static_cast<double>(P - l);
  }
  return 1.0 - miss;
}

double mean_key_edge_prob(int class_index, const SchemeParameters& params) {
  if (class_index < 0 || class_index >= params.num_classes() ||
      params.K.size() != params.mu.size()) {
    throw std::out_of_range("class index " + std::to_string(class_index) +
                            " out of range");
  }
  double lambda = 0.0;
  for (int j = 0; j < params.num_classes(); ++j) {
    lambda += pairwise_edge_prob(params.K[class_index], params.K[j], params.P) *
              params.mu[j];
  }
  return lambda;
}

double mean_intersection_edge_prob(int class_index,
                                   const SchemeParameters& params) {
  return params.alpha * mean_key_edge_prob(class_index, params);
}

double critical_scaling(int n, int k) {
  require_loglog_defined(n);
  const double log_n = std::log(static_cast<double>(n));
  return (log_n + (k - 1) * std::log(log_n)) / n;
}

double gamma_deviation(int n, int k, double Lambda1) {
  require_loglog_defined(n);
  if (k < 1) throw std::domain_error("k must be at least 1");
  if (!std::isfinite(Lambda1)) throw std::domain_error("Lambda1 must be finite");
  const double log_n = std::log(static_cast<double>(n));
  return n * Lambda1 - log_n - (k - 1) * std::log(log_n);
}

double lambda_for_gamma(int n, int k, double gamma) {
  require_loglog_defined(n);
  const double log_n = std::log(static_cast<double>(n));
  return (log_n + (k - 1) * std::log(log_n) + gamma) / n;
}

std::vector<int> keyrings_from_offsets(int K1, std::span<const int> offsets) {
  std::vector<int> K;
  K.reserve(offsets.size());
  for (int off : offsets) K.push_back(K1 + off);
  return K;
}

std::optional<int> critical_min_keyring(const KeyringSearch& search) {
  require_loglog_defined(search.n);
  if (search.k < 1) throw std::domain_error("k must be at least 1");
  if (!(search.alpha > 0.0 && search.alpha <= 1.0)) {
    throw std::domain_error("alpha must lie in (0, 1]");
  }
  if (search.mu.empty() || search.mu.size() != search.offsets.size()) {
    throw std::domain_error("mu and offsets must be nonempty and equally long");
  }
  if (search.offsets.front() != 0 ||
      !std::is_sorted(search.offsets.begin(), search.offsets.end())) {
    throw std::domain_error("offsets must start at 0 and be nondecreasing");
  }
  if (search.K_lo < 1 || search.K_lo > search.K_hi) {
    throw std::domain_error("empty or invalid K1 search range [" +
                            std::to_string(search.K_lo) + ", " +
                            std::to_string(search.K_hi) + "]");
  }
  if (search.K_hi + search.offsets.back() > search.P) {
    throw std::domain_error("K1 search range exceeds the key pool");
  }

  const double threshold = critical_scaling(search.n, search.k) / search.alpha;
  SchemeParameters params{search.n, search.mu, {}, search.P, search.alpha};
  for (int K1 = search.K_lo; K1 <= search.K_hi; ++K1) {
    params.K = keyrings_from_offsets(K1, search.offsets);
    if (mean_key_edge_prob(0, params) > threshold) return K1;
  }
  return std::nullopt;
}

double smallness_ratio(const SchemeParameters& params) {
  const double k_min = *std::min_element(params.K.begin(), params.K.end());
  double k_avg = 0.0;
  for (std::size_t j = 0; j < params.K.size(); ++j) k_avg += params.mu[j] * params.K[j];
  return k_min * k_avg / params.P;
}

}  // namespace keygraph
