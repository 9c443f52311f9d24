#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "cepbo/benchmarks.hpp"

namespace cepbo {

/// Final-iteration statistics of one (benchmark, algorithm, d) cell.
struct SummaryRow {
  std::string benchmark;
  std::string algorithm;
  std::size_t D = 0;
  std::size_t d = 0;
  std::size_t runs = 0;
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
  double iqr = 0.0;
  bool complete = true;
  Direction direction = Direction::Minimize;
};

/// wins[i][j]: replications (paired by index) where algorithms[i] ended
/// strictly better than algorithms[j].
struct WinMatrix {
  std::string benchmark;
  std::size_t D = 0;
  std::size_t d = 0;
  std::vector<std::string> algorithms;
  std::vector<std::vector<std::size_t>> wins;
  std::vector<std::vector<std::size_t>> paired;  ///< replications present for both
};

struct SummaryReport {
  std::vector<SummaryRow> rows;
  std::vector<WinMatrix> matrices;
  std::vector<std::string> errors;  ///< one entry per rejected input
};

/// Loads each results directory (see read_results); inputs that fail to
/// load or clash with an earlier input are reported in `errors` and skipped.
SummaryReport summarize(const std::vector<std::filesystem::path>& paths);

std::string format_summary_text(const SummaryReport& report);
/// benchmark,algorithm,D,d,runs,median,q25,q75,iqr,complete
std::string summary_csv(const SummaryReport& report);
/// benchmark,D,d,algorithm,opponent,wins,losses,ties
std::string wins_csv(const SummaryReport& report);

}  // namespace cepbo
