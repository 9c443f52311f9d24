#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include "cepbo/benchmarks.hpp"
#include "cepbo/config.hpp"
#include "cepbo/error.hpp"
#include "cepbo/experiment.hpp"
#include "cepbo/results.hpp"
#include "cepbo/summary.hpp"
#include "cepbo/theory.hpp"

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kConfig = 2, kValidation = 3, kIo = 4 };

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw cepbo::IoError("cannot write " + path.string());
  out << text;
  if (!out) throw cepbo::IoError("write failed for " + path.string());
}

int cmd_run(const std::string& config_path, std::size_t parallelism,
            const std::optional<cepbo::Seed>& seed, const std::optional<std::string>& out) {
  auto cfg = cepbo::load_config(config_path);
  if (seed) cfg.master_seed = *seed;
  if (out) cfg.output = *out;
  cepbo::validate(cfg);

  const auto result = cepbo::run_experiment(cfg, parallelism);
  cepbo::write_results(result, cfg.output);

  std::size_t failed = 0;
  for (const auto& run : result.runs) {
    if (!run.record) {
      ++failed;
      std::cerr << "run " << cepbo::to_string(run.algorithm) << " d=" << run.d
                << " replication " << run.replication << " failed: " << run.error << "\n";
    }
  }
  std::printf("%zu runs (%zu failed) in %.1f s -> %s\n", result.runs.size(), failed,
              result.wall_seconds, cfg.output.c_str());
  return failed == 0 ? kOk : kFailure;
}

int cmd_theory(const std::string& kind, const cepbo::TheoryRequest& base) {
  cepbo::TheoryRequest req = base;
  req.kind = cepbo::parse_matrix_kind(kind);
  const auto report = cepbo::validate_theory(req);
  std::cout << cepbo::format_theory_report(report);
  return report.pass() ? kOk : kFailure;
}

int cmd_summarize(const std::vector<std::string>& inputs, const std::optional<std::string>& out) {
  std::vector<std::filesystem::path> paths(inputs.begin(), inputs.end());
  const auto report = cepbo::summarize(paths);
  std::cout << cepbo::format_summary_text(report);
  if (out) {
    const std::filesystem::path dir(*out);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw cepbo::IoError("cannot create " + dir.string() + ": " + ec.message());
    write_file(dir / "summary.csv", cepbo::summary_csv(report));
    write_file(dir / "wins.csv", cepbo::wins_csv(report));
  }
  return report.errors.empty() ? kOk : kValidation;
}

int cmd_list() {
  for (const auto& info : cepbo::benchmark_registry()) {
    std::string ds;
    for (const auto d : info.default_d) ds += (ds.empty() ? "" : ",") + std::to_string(d);
    std::printf("%-18s D=%-5zu %-8s d=%-8s %s\n", info.name.c_str(), info.default_D,
                info.direction == cepbo::Direction::Minimize ? "minimize" : "maximize",
                ds.c_str(), info.description.c_str());
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CEP Bayesian optimization experiments"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run an experiment config and write results");
  std::string config_path;
  std::size_t parallelism = std::max(1u, std::thread::hardware_concurrency());
  std::optional<cepbo::Seed> seed;
  std::optional<std::string> out;
  run->add_option("config", config_path, "JSON experiment config")->required();
  run->add_option("--parallelism", parallelism, "Worker threads")->check(CLI::PositiveNumber);
  run->add_option("--seed", seed, "Override master_seed");
  run->add_option("--out", out, "Override output directory");

  auto* theory = app.add_subcommand("validate-theory", "Monte-Carlo checks of the projection moments");
  std::string kind = "gaussian";
  cepbo::TheoryRequest req;
  theory->add_option("--kind", kind, "gaussian | hashing")->required();
  theory->add_option("--d", req.d, "Embedding dimension")->required();
  theory->add_option("--D", req.D, "Original dimension")->required();
  theory->add_option("--samples", req.isometry_samples, "Isometry samples");
  theory->add_option("--seed", req.seed, "Seed");
  theory->add_option("--variance-samples", req.variance_samples,
                     "Samples per variance check (0 skips)");
  theory->add_option("--pairs", req.pairs, "Random unit (x, g) pairs");

  auto* summarize = app.add_subcommand("summarize", "Summarize result directories");
  std::vector<std::string> inputs;
  std::optional<std::string> summary_out;
  summarize->add_option("results", inputs, "Result directories")->required();
  summarize->add_option("--out", summary_out, "Write summary.csv and wins.csv here");

  auto* list = app.add_subcommand("list-benchmarks", "Show the benchmark registry");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (run->parsed()) return cmd_run(config_path, parallelism, seed, out);
    if (theory->parsed()) return cmd_theory(kind, req);
    if (summarize->parsed()) return cmd_summarize(inputs, summary_out);
    if (list->parsed()) return cmd_list();
  } catch (const cepbo::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const cepbo::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const cepbo::DimensionError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const cepbo::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}
