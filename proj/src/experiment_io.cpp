#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "keygraph/harness.hpp"

namespace keygraph {

namespace {

using nlohmann::json;

const std::set<std::string> kTopLevelKeys = {
    "n",      "P",          "mu",           "alphas",        "offsets",     "K1_range",
    "k_list", "trials",     "master_seed",  "retain_layers", "output_path", "notes"};
const std::set<std::string> kRangeKeys = {"lo", "hi", "step"};

template <typename T>
T get_as(const json& value, const std::string& key) {
  try {
    return value.get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("config key \"" + key + "\" has the wrong type: " + e.what());
  }
}

json to_json_object(const ExperimentConfig& c, bool include_outputs) {
  json j;
  j["n"] = c.n;
  j["P"] = c.P;
  j["mu"] = c.mu;
  j["alphas"] = c.alphas;
  j["offsets"] = c.offsets;
  j["K1_range"] = {{"lo", c.K1_lo}, {"hi", c.K1_hi}, {"step", c.K1_step}};
  j["k_list"] = c.k_list;
  j["trials"] = c.trials;
  j["master_seed"] = c.master_seed;
  j["retain_layers"] = c.retain_layers;
  if (include_outputs) {
    j["output_path"] = c.output_path;
    j["notes"] = c.notes;
  }
  return j;
}

std::string format_double(const char* fmt, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, value);
  return buf;
}

}  // namespace

ExperimentConfig parse_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config must be a JSON object");

  ExperimentConfig c;
  for (const auto& [key, value] : root.items()) {
    if (!kTopLevelKeys.count(key)) throw ConfigError("unknown config key \"" + key + "\"");
    if (key == "n") c.n = get_as<int>(value, key);
    else if (key == "P") c.P = get_as<int>(value, key);
    else if (key == "mu") c.mu = get_as<std::vector<double>>(value, key);
    else if (key == "alphas") c.alphas = get_as<std::vector<double>>(value, key);
    else if (key == "offsets") c.offsets = get_as<std::vector<int>>(value, key);
    else if (key == "k_list") c.k_list = get_as<std::vector<int>>(value, key);
    else if (key == "trials") c.trials = get_as<int>(value, key);
    else if (key == "master_seed") c.master_seed = get_as<std::uint64_t>(value, key);
    else if (key == "retain_layers") c.retain_layers = get_as<bool>(value, key);
    else if (key == "output_path") c.output_path = get_as<std::string>(value, key);
    else if (key == "notes") c.notes = get_as<std::vector<std::string>>(value, key);
    else if (key == "K1_range") {
      if (!value.is_object()) throw ConfigError("K1_range must be an object {lo, hi, step}");
      for (const auto& [rkey, rvalue] : value.items()) {
        if (!kRangeKeys.count(rkey)) {
          throw ConfigError("unknown config key \"K1_range." + rkey + "\"");
        }
        const int v = get_as<int>(rvalue, "K1_range." + rkey);
        if (rkey == "lo") c.K1_lo = v;
        else if (rkey == "hi") c.K1_hi = v;
        else c.K1_step = v;
      }
    }
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_config(text.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string config_to_json(const ExperimentConfig& config) {
  return to_json_object(config, true).dump(2);
}

std::uint64_t config_hash(const ExperimentConfig& config) {
  const std::string text = to_json_object(canonicalized(config), false).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string results_csv(const std::vector<ExperimentRecord>& records) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (const auto& r : records) {
    const auto& d = r.diagnostics;
    os << format_double("%.6g", r.alpha) << ',' << r.K1 << ',' << r.k << ',' << r.n << ','
       << r.P << ',' << r.trials << ',' << r.count_mindeg_ge_k << ',' << r.count_kconn << ','
       << r.count_discrepancy << ',' << format_double("%.6f", r.p_mindeg) << ','
       << format_double("%.6f", r.p_kconn) << ',' << format_double("%.9g", d.lambda1) << ','
       << format_double("%.9g", d.Lambda1) << ',' << format_double("%.9g", d.gamma) << ','
       << (d.critical_K1 ? std::to_string(*d.critical_K1) : std::string("none")) << ','
       << format_double("%.9g", d.smallness_ratio) << '\n';
  }
  return os.str();
}

std::string metadata_json(const ExperimentConfig& config) {
  json meta;
  meta["artifact"] = kArtifactName;
  meta["version"] = kArtifactVersion;
  meta["master_seed"] = config.master_seed;
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(config_hash(config)));
  meta["config_hash"] = hash;
  meta["config"] = to_json_object(canonicalized(config), false);
  meta["notes"] = config.notes;
  return meta.dump(2) + "\n";
}

void write_results(const ExperimentConfig& config,
                   const std::vector<ExperimentRecord>& records, const std::string& path) {
  auto write_file = [](const std::string& file, const std::string& content) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open output file for writing: " + file);
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("failed writing output file: " + file);
  };
  write_file(path, results_csv(records));
  write_file(path + ".meta.json", metadata_json(config));
}

}  // namespace keygraph
