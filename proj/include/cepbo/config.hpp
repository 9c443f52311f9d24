#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cepbo/optimizer.hpp"
#include "cepbo/rng.hpp"

namespace cepbo {

/// A fully resolved experiment: every (algorithm, d, replication) cell is a run.
struct ExperimentConfig {
  std::string benchmark;
  std::size_t D = 0;
  std::vector<std::size_t> d_values;
  std::vector<Algorithm> algorithms;
  std::size_t replications = 50;
  std::size_t evaluations = 50;   ///< tN
  std::optional<std::size_t> t0;  ///< empty: t0 = d
  Seed master_seed = 0;
  Seed perturbation_seed = 0;
  std::size_t acquisition_budget = 1024;
  std::size_t restarts = 5;
  bool permute_coordinates = false;
  std::string output = "results";

  std::size_t t0_for(std::size_t d) const noexcept { return t0.value_or(d); }
};

/// Builds a config from a JSON object, applying defaults. Keys:
///   benchmark (required), algorithm | algorithms (required), D, d,
///   replications, evaluations, t0, master_seed, perturbation_seed,
///   acquisition_budget, restarts, permute_coordinates, output.
/// Throws ConfigError for type problems or unknown keys and ValidationError
/// for out-of-range values; both name the offending field.
ExperimentConfig parse_config(const nlohmann::json& doc);

/// Reads and parses a JSON config file. Missing/unreadable files raise IoError,
/// malformed JSON raises ConfigError.
ExperimentConfig load_config(const std::filesystem::path& path);

void validate(const ExperimentConfig& cfg);

nlohmann::json to_json(const ExperimentConfig& cfg);

}  // namespace cepbo
