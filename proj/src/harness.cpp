#include "keygraph/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdio>
#include <exception>
#include <map>
#include <sstream>
#include <thread>
#include <utility>

#include "keygraph/graphalgs.hpp"
#include "keygraph/rng.hpp"
#include "keygraph/sampler.hpp"

namespace keygraph {

std::vector<int> ExperimentConfig::K1_values() const {
  std::vector<int> values;
  if (K1_step < 1) return values;
  for (int K1 = K1_lo; K1 <= K1_hi; K1 += K1_step) values.push_back(K1);
  return values;
}

SchemeParameters ExperimentConfig::params_at(double alpha, int K1) const {
  return SchemeParameters{n, mu, keyrings_from_offsets(K1, offsets), P, alpha};
}

ExperimentConfig figure1_config() {
  ExperimentConfig config;
  config.notes.push_back(
      "two-class grid: n=500, P=10000, mu=(0.5,0.5), K2=K1+10, K1 in [5,40], k=2, "
      "alpha in {0.2,0.4,0.6,0.8}, 200 trials per point");
  return config;
}

ExperimentConfig figure2_config(double alpha) {
  ExperimentConfig config;
  config.alphas = {alpha};
  config.K1_lo = 15;
  config.K1_hi = 40;
  config.k_list = {4, 6, 8, 10};
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "k-connectivity grid: k in {4,6,8,10}, K1 in [15,40]; channel probability "
                "alpha=%g is a configurable default",
                alpha);
  config.notes.emplace_back(buf);
  return config;
}

ExperimentConfig canonicalized(ExperimentConfig config) {
  std::sort(config.alphas.begin(), config.alphas.end());
  config.alphas.erase(std::unique(config.alphas.begin(), config.alphas.end()),
                      config.alphas.end());
  std::sort(config.k_list.begin(), config.k_list.end());
  config.k_list.erase(std::unique(config.k_list.begin(), config.k_list.end()),
                      config.k_list.end());
  return config;
}

void validate_config(const ExperimentConfig& config) {
  auto fail = [](const std::string& what) { throw ConfigError(what); };
  if (config.trials < 1) fail("trials must be at least 1");
  if (config.n < 3) fail("n must be at least 3");
  if (config.K1_step < 1) fail("K1 step must be at least 1");
  if (config.K1_lo > config.K1_hi) {
    fail("K1 range [" + std::to_string(config.K1_lo) + ", " + std::to_string(config.K1_hi) +
         "] is empty");
  }
  if (config.alphas.empty()) fail("at least one alpha is required");
  if (config.k_list.empty()) fail("at least one k is required");
  for (int k : config.k_list) {
    if (k < 1) fail("every k must be at least 1");
  }
  if (config.offsets.size() != config.mu.size()) {
    fail("offsets and mu must have the same length");
  }
  if (config.offsets.empty() || config.offsets.front() != 0) {
    fail("offsets must start with 0");
  }
  for (double alpha : config.alphas) {
    for (int K1 : config.K1_values()) {
      const ValidationReport report = validate(config.params_at(alpha, K1));
      if (!report.ok()) {
        std::ostringstream os;
        os << "invalid parameters at alpha=" << alpha << ", K1=" << K1 << ": "
           << report.errors.front();
        fail(os.str());
      }
    }
  }
}

std::uint64_t grid_point_key(double alpha, int K1) {
  return mix64(std::bit_cast<std::uint64_t>(alpha) ^ mix64(static_cast<std::uint64_t>(K1)));
}

std::optional<int> critical_K1_for(const ExperimentConfig& config, double alpha, int k) {
  KeyringSearch search;
  search.n = config.n;
  search.k = k;
  search.alpha = alpha;
  search.mu = config.params_at(alpha, config.K1_lo).normalized().mu;
  search.offsets = config.offsets;
  search.P = config.P;
  search.K_lo = config.K1_lo;
  search.K_hi = config.K1_hi;
  return critical_min_keyring(search);
}

ScalingDiagnostics attach_diagnostics(const ExperimentConfig& config, double alpha,
                                      int K1, int k, std::optional<int> critical_K1) {
  const SchemeParameters params = config.params_at(alpha, K1).normalized();
  ScalingDiagnostics d;
  d.lambda1 = mean_key_edge_prob(0, params);
  d.Lambda1 = params.alpha * d.lambda1;
  d.gamma = gamma_deviation(params.n, k, d.Lambda1);
  d.critical_K1 = critical_K1;
  d.smallness_ratio = smallness_ratio(params);
  return d;
}

ScalingDiagnostics attach_diagnostics(const ExperimentConfig& config, double alpha,
                                      int K1, int k) {
  return attach_diagnostics(config, alpha, K1, k, critical_K1_for(config, alpha, k));
}

namespace {

// Per-trial results laid out flat: one slot per (trial, k) for the two
// events, one slot per (trial, degree l) for l < max k.
struct TrialTable {
  std::size_t num_k = 0;
  std::size_t max_k = 0;
  std::vector<std::uint8_t> mindeg_ok;
  std::vector<std::uint8_t> kconn;
  std::vector<int> degree_counts;
};

void run_trial(const ExperimentConfig& config, const SchemeParameters& params,
               std::uint64_t point_key, int trial, IntersectionGraphSampler& sampler,
               ConnectivityChecker& checker, TrialTable& table, std::size_t unit) {
  RngStream stream = derive_trial_stream(config.master_seed, point_key,
                                         static_cast<std::uint64_t>(trial));
  SampleOptions options;
  options.retain_layers = config.retain_layers;
  const SampledGraph sample = sampler.sample(params, stream, options);
  const Graph& g = sample.graph;

  if (sample.key_layer) {
    for (int x = 0; x < g.num_nodes(); ++x) {
      for (int y = x + 1; y < g.num_nodes(); ++y) {
        const bool expected = sample.key_layer->test(x, y) && sample.channel_layer->test(x, y);
        if (expected != g.has_edge(x, y)) {
          throw std::logic_error("layer inconsistency in sampled graph");
        }
      }
    }
  }

  const DegreeProfile profile = degree_profile(g);
  bool previous_kconn = true;
  for (std::size_t i = 0; i < table.num_k; ++i) {
    const int k = config.k_list[i];
    const bool mindeg = profile.min_degree >= k;
    const bool kconn = checker.is_k_connected(g, k);
    if (kconn && !mindeg) {
      throw std::logic_error("k-connected sample with minimum degree below k");
    }
    if (kconn && !previous_kconn) {
      throw std::logic_error("k-connectivity not monotone in k on a single sample");
    }
    previous_kconn = kconn;
    table.mindeg_ok[unit * table.num_k + i] = mindeg ? 1 : 0;
    table.kconn[unit * table.num_k + i] = kconn ? 1 : 0;
  }
  for (std::size_t l = 0; l < table.max_k; ++l) {
    table.degree_counts[unit * table.max_k + l] = profile.count(static_cast<int>(l));
  }
}

}  // namespace

std::vector<ExperimentRecord> run_grid(const ExperimentConfig& raw_config,
                                       const RunOptions& options) {
  const ExperimentConfig config = canonicalized(raw_config);
  validate_config(config);

  struct GridPoint {
    double alpha;
    int K1;
    SchemeParameters params;
    std::uint64_t key;
  };
  std::vector<GridPoint> points;
  for (double alpha : config.alphas) {
    for (int K1 : config.K1_values()) {
      points.push_back({alpha, K1, config.params_at(alpha, K1).normalized(),
                        grid_point_key(alpha, K1)});
    }
  }

  const auto trials = static_cast<std::size_t>(config.trials);
  const std::size_t units = points.size() * trials;
  TrialTable table;
  table.num_k = config.k_list.size();
  table.max_k = static_cast<std::size_t>(config.k_list.back());
  table.mindeg_ok.assign(units * table.num_k, 0);
  table.kconn.assign(units * table.num_k, 0);
  table.degree_counts.assign(units * table.max_k, 0);

  std::atomic<std::size_t> next{0};
  auto worker = [&](std::exception_ptr& error) {
    try {
      IntersectionGraphSampler sampler;
      ConnectivityChecker checker;
      for (std::size_t unit = next++; unit < units; unit = next++) {
        const GridPoint& point = points[unit / trials];
        run_trial(config, point.params, point.key, static_cast<int>(unit % trials), sampler,
                  checker, table, unit);
      }
    } catch (...) {
      error = std::current_exception();
      next = units;
    }
  };

  const int workers = std::max(1, options.workers);
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  if (workers == 1) {
    worker(errors[0]);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker, std::ref(errors[w]));
    for (auto& t : pool) t.join();
  }
  for (const auto& error : errors) {
    if (error) std::rethrow_exception(error);
  }

  std::map<std::pair<double, int>, std::optional<int>> critical;
  for (double alpha : config.alphas) {
    for (int k : config.k_list) critical[{alpha, k}] = critical_K1_for(config, alpha, k);
  }

  std::vector<ExperimentRecord> records;
  const std::size_t per_alpha = config.K1_values().size();
  for (std::size_t a = 0; a < config.alphas.size(); ++a) {
    for (std::size_t ki = 0; ki < table.num_k; ++ki) {
      for (std::size_t j = 0; j < per_alpha; ++j) {
        const std::size_t p = a * per_alpha + j;
        const GridPoint& point = points[p];
        const int k = config.k_list[ki];
        ExperimentRecord rec;
        rec.alpha = point.alpha;
        rec.K1 = point.K1;
        rec.k = k;
        rec.n = config.n;
        rec.P = config.P;
        rec.trials = config.trials;
        rec.mean_degree_counts.assign(static_cast<std::size_t>(k), 0.0);
        for (std::size_t t = 0; t < trials; ++t) {
          const std::size_t unit = p * trials + t;
          rec.count_mindeg_ge_k += table.mindeg_ok[unit * table.num_k + ki];
          rec.count_kconn += table.kconn[unit * table.num_k + ki];
          for (int l = 0; l < k; ++l) {
            rec.mean_degree_counts[l] += table.degree_counts[unit * table.max_k + l];
          }
        }
        for (double& mean : rec.mean_degree_counts) mean /= config.trials;
        rec.count_discrepancy = rec.count_mindeg_ge_k - rec.count_kconn;
        rec.p_mindeg = static_cast<double>(rec.count_mindeg_ge_k) / config.trials;
        rec.p_kconn = static_cast<double>(rec.count_kconn) / config.trials;
        rec.diagnostics =
            attach_diagnostics(config, point.alpha, point.K1, k, critical[{point.alpha, k}]);
        records.push_back(std::move(rec));
      }
    }
  }
  return records;
}

bool TransitionWindow::complete() const {
  return lower && upper && p_at_lower <= kWindowLowProbe && p_at_upper >= kWindowHighProbe;
}

bool TransitionWindow::critical_inside() const {
  return lower && upper && critical_K1 && *lower <= *critical_K1 && *critical_K1 <= *upper;
}

std::vector<TransitionWindow> summarize(const std::vector<ExperimentRecord>& records) {
  std::map<std::pair<double, int>, std::vector<const ExperimentRecord*>> curves;
  for (const auto& rec : records) curves[{rec.alpha, rec.k}].push_back(&rec);

  std::vector<TransitionWindow> out;
  for (auto& [key, curve] : curves) {
    std::sort(curve.begin(), curve.end(),
              [](const ExperimentRecord* a, const ExperimentRecord* b) { return a->K1 < b->K1; });
    TransitionWindow w;
    w.alpha = key.first;
    w.k = key.second;
    w.critical_K1 = curve.front()->diagnostics.critical_K1;

    std::size_t upper_idx = curve.size();
    for (std::size_t i = 0; i < curve.size(); ++i) {
      if (curve[i]->p_kconn >= kWindowHighProbe) {
        upper_idx = i;
        break;
      }
    }
    std::optional<std::size_t> lower_idx;
    for (std::size_t i = 0; i < upper_idx; ++i) {
      if (curve[i]->p_kconn <= kWindowLowProbe) lower_idx = i;
    }
    if (upper_idx < curve.size()) {
      w.upper = curve[upper_idx]->K1;
      w.p_at_upper = curve[upper_idx]->p_kconn;
      const std::size_t lo = lower_idx.value_or(0);
      w.lower = curve[lo]->K1;
      w.p_at_lower = curve[lo]->p_kconn;
    } else if (lower_idx) {
      w.lower = curve[*lower_idx]->K1;
      w.p_at_lower = curve[*lower_idx]->p_kconn;
    }
    out.push_back(w);
  }
  return out;
}

std::string format_summary(const std::vector<TransitionWindow>& windows) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-8s %-4s %-18s %-12s %-14s\n", "alpha", "k",
                "window[K1]", "critical_K1", "crit_in_window");
  os << line;
  for (const auto& w : windows) {
    std::string window;
    if (!w.has_transition()) {
      window = "no transition";
    } else {
      window = "[" + std::to_string(*w.lower) + ", " + std::to_string(*w.upper) + "]";
      if (!w.complete()) window += "*";
    }
    const std::string crit = w.critical_K1 ? std::to_string(*w.critical_K1) : "none";
    const char* inside = !w.has_transition() ? "n/a" : (w.critical_inside() ? "yes" : "no");
    std::snprintf(line, sizeof line, "%-8g %-4d %-18s %-12s %-14s\n", w.alpha, w.k,
                  window.c_str(), crit.c_str(), inside);
    os << line;
  }
  os << "(* window endpoint not observed at the 0.05/0.95 probes)\n";
  return os.str();
}

}  // namespace keygraph
