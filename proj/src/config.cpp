#include "cepbo/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "cepbo/benchmarks.hpp"
#include "cepbo/error.hpp"

namespace cepbo {
namespace {

using nlohmann::json;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "benchmark", "algorithm", "algorithms", "D", "d", "replications", "evaluations", "t0",
      "master_seed", "perturbation_seed", "acquisition_budget", "restarts",
      "permute_coordinates", "output"};
  return keys;
}

std::size_t as_count(const json& v, const std::string& field) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError("field '" + field + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

Seed as_seed(const json& v, const std::string& field) {
  if (!v.is_number_integer()) throw ConfigError("field '" + field + "' must be an integer");
  return v.is_number_unsigned() ? v.get<std::uint64_t>()
                                : static_cast<std::uint64_t>(v.get<std::int64_t>());
}

}  // namespace

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (!known_keys().contains(key)) throw ConfigError("unknown field '" + key + "'");
  }

  ExperimentConfig cfg;
  if (!doc.contains("benchmark") || !doc["benchmark"].is_string()) {
    throw ConfigError("field 'benchmark' is required and must be a string");
  }
  cfg.benchmark = doc["benchmark"].get<std::string>();
  const BenchmarkInfo& info = find_benchmark(cfg.benchmark);

  if (doc.contains("algorithm") && doc.contains("algorithms")) {
    throw ConfigError("give either 'algorithm' or 'algorithms', not both");
  }
  const char* algo_key = doc.contains("algorithms") ? "algorithms" : "algorithm";
  if (!doc.contains(algo_key)) throw ConfigError("field 'algorithm' is required");
  const json& algos = doc[algo_key];
  const json list = algos.is_array() ? algos : json::array({algos});
  if (list.empty()) throw ConfigError("field '" + std::string(algo_key) + "' is empty");
  for (const auto& a : list) {
    if (!a.is_string()) throw ConfigError("field '" + std::string(algo_key) + "' must hold strings");
    cfg.algorithms.push_back(parse_algorithm(a.get<std::string>()));
  }

  cfg.D = doc.contains("D") ? as_count(doc["D"], "D") : info.default_D;
  if (doc.contains("d")) {
    const json& d = doc["d"];
    if (d.is_array()) {
      for (const auto& v : d) cfg.d_values.push_back(as_count(v, "d"));
    } else {
      cfg.d_values.push_back(as_count(d, "d"));
    }
  } else {
    cfg.d_values = info.default_d;
  }
  if (doc.contains("replications")) cfg.replications = as_count(doc["replications"], "replications");
  if (doc.contains("evaluations")) cfg.evaluations = as_count(doc["evaluations"], "evaluations");
  if (doc.contains("t0") && !doc["t0"].is_null()) cfg.t0 = as_count(doc["t0"], "t0");
  if (doc.contains("master_seed")) cfg.master_seed = as_seed(doc["master_seed"], "master_seed");
  if (doc.contains("perturbation_seed")) {
    cfg.perturbation_seed = as_seed(doc["perturbation_seed"], "perturbation_seed");
  }
  if (doc.contains("acquisition_budget")) {
    cfg.acquisition_budget = as_count(doc["acquisition_budget"], "acquisition_budget");
  }
  if (doc.contains("restarts")) cfg.restarts = as_count(doc["restarts"], "restarts");
  if (doc.contains("permute_coordinates")) {
    if (!doc["permute_coordinates"].is_boolean()) {
      throw ConfigError("field 'permute_coordinates' must be a boolean");
    }
    cfg.permute_coordinates = doc["permute_coordinates"].get<bool>();
  }
  if (doc.contains("output")) {
    if (!doc["output"].is_string()) throw ConfigError("field 'output' must be a string");
    cfg.output = doc["output"].get<std::string>();
  }
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path.string() + "': " + e.what());
  }
  return parse_config(doc);
}

void validate(const ExperimentConfig& cfg) {
  const BenchmarkInfo& info = find_benchmark(cfg.benchmark);
  if (cfg.D == 0) throw ValidationError("field 'D' must be positive");
  if (info.effective_dim > cfg.D) {
    throw ValidationError("field 'D': " + cfg.benchmark + " needs D >= " +
                          std::to_string(info.effective_dim));
  }
  if (cfg.algorithms.empty()) throw ValidationError("field 'algorithms' is empty");
  if (cfg.d_values.empty()) throw ValidationError("field 'd' is empty");
  for (const std::size_t d : cfg.d_values) {
    if (d == 0) throw ValidationError("field 'd': embedding dimension must be positive");
    if (d > cfg.D) {
      throw ValidationError("field 'd': d=" + std::to_string(d) + " exceeds D=" + std::to_string(cfg.D));
    }
    if (cfg.t0_for(d) == 0) throw ValidationError("field 't0' must be positive");
    if (cfg.t0_for(d) >= cfg.evaluations) {
      throw ValidationError("field 'evaluations': must exceed t0=" + std::to_string(cfg.t0_for(d)));
    }
  }
  if (cfg.replications == 0) throw ValidationError("field 'replications' must be positive");
  if (cfg.acquisition_budget == 0) throw ValidationError("field 'acquisition_budget' must be positive");
  if (cfg.restarts == 0) throw ValidationError("field 'restarts' must be positive");
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
  json algos = json::array();
  for (const auto a : cfg.algorithms) algos.push_back(std::string(to_string(a)));
  json doc = {{"benchmark", cfg.benchmark},
              {"D", cfg.D},
              {"d", cfg.d_values},
              {"algorithms", algos},
              {"replications", cfg.replications},
              {"evaluations", cfg.evaluations},
              {"master_seed", cfg.master_seed},
              {"perturbation_seed", cfg.perturbation_seed},
              {"acquisition_budget", cfg.acquisition_budget},
              {"restarts", cfg.restarts},
              {"permute_coordinates", cfg.permute_coordinates},
              {"output", cfg.output}};
  doc["t0"] = cfg.t0 ? json(*cfg.t0) : json(nullptr);
  return doc;
}

}  // namespace cepbo
