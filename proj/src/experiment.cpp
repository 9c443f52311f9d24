#include "cepbo/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <exception>
#include <thread>

#include "cepbo/error.hpp"

namespace cepbo {
namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

void fnv_byte(std::uint64_t& h, unsigned char byte) {
  h ^= byte;
  h *= kFnvPrime;
}

void fnv_u64(std::uint64_t& h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) fnv_byte(h, static_cast<unsigned char>((v >> (8 * i)) & 0xFF));
}

void fnv_string(std::uint64_t& h, std::string_view s) {
  for (const char c : s) fnv_byte(h, static_cast<unsigned char>(c));
  fnv_byte(h, 0);
}

}  // namespace

Seed run_seed(Seed master_seed, std::string_view benchmark, Algorithm algorithm, std::size_t d,
              std::size_t replication) {
  std::uint64_t h = kFnvOffset;
  fnv_u64(h, master_seed);
  fnv_string(h, benchmark);
  fnv_string(h, to_string(algorithm));
  fnv_u64(h, d);
  fnv_u64(h, replication);
  return mix64(h);
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw ValidationError("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  if (frac == 0.0) return values[lo];
  return values[lo] + frac * (values[hi] - values[lo]);
}

std::vector<AggregatePoint> aggregate_curves(const std::vector<std::vector<double>>& curves) {
  if (curves.empty()) return {};
  const std::size_t length = curves.front().size();
  std::vector<AggregatePoint> out(length);
  std::vector<double> column(curves.size());
  for (std::size_t t = 0; t < length; ++t) {
    for (std::size_t r = 0; r < curves.size(); ++r) {
      if (curves[r].size() != length) throw ValidationError("aggregate_curves: ragged curves");
      column[r] = curves[r][t];
    }
    out[t] = {quantile(column, 0.5), quantile(column, 0.25), quantile(column, 0.75)};
  }
  return out;
}

std::vector<double> reported_curve(const RunRecord& record, Direction direction) {
  std::vector<double> out(record.best_so_far.size());
  std::transform(record.best_so_far.begin(), record.best_so_far.end(), out.begin(),
                 [direction](double v) { return to_maximization(direction, v); });
  return out;
}

std::vector<CellAggregate> aggregate_runs(const ExperimentConfig& cfg, Direction direction,
                                          const std::vector<RunOutcome>& runs) {
  std::vector<CellAggregate> cells;
  for (const Algorithm algorithm : cfg.algorithms) {
    for (const std::size_t d : cfg.d_values) {
      CellAggregate cell;
      cell.algorithm = algorithm;
      cell.d = d;
      std::vector<std::vector<double>> curves;
      for (const auto& run : runs) {
        if (run.algorithm != algorithm || run.d != d) continue;
        if (run.record) {
          curves.push_back(reported_curve(*run.record, direction));
        } else {
          cell.complete = false;
        }
      }
      cell.runs = curves.size();
      if (curves.size() < cfg.replications) cell.complete = false;
      cell.per_iteration = aggregate_curves(curves);
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, std::size_t parallelism) {
  validate(cfg);
  const auto started = std::chrono::steady_clock::now();
  const Benchmark benchmark(cfg.benchmark, cfg.D, cfg.perturbation_seed, cfg.permute_coordinates);

  ExperimentResult result;
  result.config = cfg;
  result.direction = benchmark.direction();
  for (const Algorithm algorithm : cfg.algorithms) {
    for (const std::size_t d : cfg.d_values) {
      for (std::size_t r = 0; r < cfg.replications; ++r) {
        RunOutcome run;
        run.algorithm = algorithm;
        run.d = d;
        run.replication = r;
        run.seed = run_seed(cfg.master_seed, cfg.benchmark, algorithm, d, r);
        result.runs.push_back(std::move(run));
      }
    }
  }

  const Objective objective = [&benchmark](const Eigen::VectorXd& x) {
    return benchmark.evaluate_max(x);
  };
  auto execute = [&](RunOutcome& run) {
    OptimizerConfig oc;
    oc.algorithm = run.algorithm;
    oc.D = cfg.D;
    oc.d = run.d;
    oc.t0 = cfg.t0_for(run.d);
    oc.tN = cfg.evaluations;
    oc.acquisition_budget = cfg.acquisition_budget;
    oc.restarts = cfg.restarts;
    oc.seed = run.seed;
    try {
      run.record = run_optimizer(objective, oc);
    } catch (const std::exception& e) {
      run.error = e.what();
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(parallelism, 1, result.runs.size());
  if (workers == 1) {
    for (auto& run : result.runs) execute(run);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < result.runs.size(); i = next++) execute(result.runs[i]);
      });
    }
    for (auto& t : pool) t.join();
  }

  result.aggregates = aggregate_runs(cfg, result.direction, result.runs);
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace cepbo
