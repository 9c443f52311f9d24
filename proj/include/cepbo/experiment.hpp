#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cepbo/benchmarks.hpp"
#include "cepbo/config.hpp"
#include "cepbo/optimizer.hpp"

namespace cepbo {

/// Seed of one run: FNV-1a (64-bit) over the byte string
///   master_seed (8 bytes, little-endian) ‖ benchmark name ‖ 0x00 ‖
///   algorithm name ‖ 0x00 ‖ d (8 bytes LE) ‖ replication (8 bytes LE),
/// passed through mix64. Independent of the order of lists in the config.
Seed run_seed(Seed master_seed, std::string_view benchmark, Algorithm algorithm, std::size_t d,
              std::size_t replication);

struct RunOutcome {
  Algorithm algorithm = Algorithm::CepRembo;
  std::size_t d = 0;
  std::size_t replication = 0;
  Seed seed = 0;
  std::optional<RunRecord> record;  ///< empty if the run threw
  std::string error;
};

struct AggregatePoint {
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
};

/// Per-iteration quantiles of best-so-far across the completed replications
/// of one (algorithm, d) cell, in the benchmark's reporting orientation.
struct CellAggregate {
  Algorithm algorithm = Algorithm::CepRembo;
  std::size_t d = 0;
  std::size_t runs = 0;
  bool complete = true;
  std::vector<AggregatePoint> per_iteration;
};

struct ExperimentResult {
  ExperimentConfig config;
  Direction direction = Direction::Minimize;
  std::vector<RunOutcome> runs;  ///< ordered algorithm-major, then d, then replication
  std::vector<CellAggregate> aggregates;
  double wall_seconds = 0.0;
};

/// Linear-interpolation quantile (R type 7). `values` must be non-empty.
double quantile(std::vector<double> values, double q);

/// Quantiles across equally long curves, iteration by iteration.
std::vector<AggregatePoint> aggregate_curves(const std::vector<std::vector<double>>& curves);

/// Best-so-far of a run in reporting orientation (minimization benchmarks
/// are shown as running minima of the original objective).
std::vector<double> reported_curve(const RunRecord& record, Direction direction);

/// Executes every (algorithm, d, replication) run with up to `parallelism`
/// worker threads. Results do not depend on the worker count.
ExperimentResult run_experiment(const ExperimentConfig& cfg, std::size_t parallelism);

/// Recomputes the per-cell aggregates from the raw runs.
std::vector<CellAggregate> aggregate_runs(const ExperimentConfig& cfg, Direction direction,
                                          const std::vector<RunOutcome>& runs);

}  // namespace cepbo
