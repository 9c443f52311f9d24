#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "cepbo/benchmarks.hpp"
#include "cepbo/experiment.hpp"

namespace cepbo {

inline constexpr int kResultsSchemaVersion = 1;
inline constexpr const char* kCodeVersion = "cepbo 0.1.0";

inline constexpr const char* kRawFile = "raw.csv";
inline constexpr const char* kAggregateFile = "aggregate.csv";
inline constexpr const char* kMetadataFile = "metadata.json";

/// Round-trip decimal representation ("%.17g").
std::string format_double(double value);

/// FNV-1a (64-bit) over the IEEE-754 bit patterns of x, each emitted
/// least-significant byte first; 16 lowercase hex digits.
std::string hash_point(const Eigen::VectorXd& x);

/// '|'-joined tokens (init, fallback, hyperfallback, nonfinite, cy=<n>, cx=<n>)
/// or "-" when none apply.
std::string format_flags(const IterationRecord& rec);

struct RawRow {
  std::string benchmark;
  std::string algorithm;
  std::size_t D = 0;
  std::size_t d = 0;
  std::size_t replication = 0;
  std::size_t iteration = 0;
  std::string x_hash;
  double f = 0.0;
  double best_so_far = 0.0;
  std::string flags;
};

struct AggregateRow {
  std::string benchmark;
  std::string algorithm;
  std::size_t D = 0;
  std::size_t d = 0;
  std::size_t iteration = 0;
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
  std::size_t runs = 0;
};

struct LoadedResults {
  std::filesystem::path directory;
  nlohmann::json metadata;
  Direction direction = Direction::Minimize;
  std::vector<RawRow> raw;
  std::vector<AggregateRow> aggregates;
};

std::vector<RawRow> raw_rows(const ExperimentResult& result);
std::vector<AggregateRow> aggregate_rows(const ExperimentResult& result);
nlohmann::json metadata_json(const ExperimentResult& result);

/// Writes raw.csv, aggregate.csv and metadata.json into `directory`
/// (created if needed). Throws IoError naming the path on failure.
void write_results(const ExperimentResult& result, const std::filesystem::path& directory);

/// Loads a results directory and recomputes the aggregates from the raw rows;
/// any disagreement raises ValidationError naming the file.
LoadedResults read_results(const std::filesystem::path& directory);

}  // namespace cepbo
