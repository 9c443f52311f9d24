#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <functional>
#include <string_view>
#include <vector>

#include "cepbo/acquisition.hpp"
#include "cepbo/box.hpp"
#include "cepbo/projection.hpp"
#include "cepbo/rng.hpp"
#include "cepbo/surrogate.hpp"
#include "cepbo/trajectory.hpp"

namespace cepbo {

/// CEP variants draw a fresh matrix every iteration; REMBO/HeSBO keep the
/// matrix drawn at the start of the run.
enum class Algorithm { CepRembo, CepHesbo, Rembo, Hesbo };

std::string_view to_string(Algorithm algorithm) noexcept;
/// Accepts "CEP-REMBO", "CEP-HeSBO", "REMBO", "HeSBO" (case-insensitive).
Algorithm parse_algorithm(std::string_view text);
MatrixKind matrix_kind(Algorithm algorithm) noexcept;
bool uses_fresh_matrix(Algorithm algorithm) noexcept;

struct OptimizerConfig {
  Algorithm algorithm = Algorithm::CepRembo;
  std::size_t D = 0;
  std::size_t d = 0;
  std::size_t t0 = 0;  ///< initial design size, counted inside tN
  std::size_t tN = 0;  ///< total objective evaluations
  std::size_t acquisition_budget = 1024;
  std::size_t restarts = 5;
  Seed seed = 0;

  /// Requires 1 ≤ d ≤ D and 1 ≤ t0 < tN; throws ValidationError.
  void validate() const;
};

/// X = [−1, 1]^D.
BoxDomain original_box(std::size_t D);
/// Y = [−√d, √d]^d.
BoxDomain embedding_box(std::size_t d);

using Objective = std::function<double(const Eigen::VectorXd&)>;

/// t0 i.i.d. uniform points in X, drawn coordinate by coordinate.
std::vector<Eigen::VectorXd> initialize_design(std::size_t t0, const BoxDomain& X, Seed seed);

struct StepDiagnostics {
  MatrixKind kind = MatrixKind::Gaussian;
  Seed matrix_seed = 0;
  Eigen::VectorXd y;                 ///< acquisition maximizer in Y
  double acquisition_value = 0.0;    ///< EI at y (0 on fallback)
  GpHyperparams hyper;
  bool surrogate_fallback = false;   ///< x came from the uniform fallback
  bool hyper_fallback = false;       ///< default hyperparameters were used
  std::size_t clamped_embedding = 0; ///< coordinates clamped while condensing the data
  std::size_t clamped_original = 0;  ///< coordinates clamped while expanding y
};

struct StepResult {
  Eigen::VectorXd x;
  StepDiagnostics diagnostics;
};

/// Seed of the matrix a CEP run draws at `iteration` (0-based evaluation index).
Seed step_matrix_seed(Seed run_seed, std::size_t iteration) noexcept;

/// One CEP iteration: draw A_t, condense the trajectory into Y, fit the GP,
/// maximize EI over Y and expand the maximizer back into X. `iteration`
/// selects the per-iteration random streams. Points with non-finite values
/// are left out of the fit. If the surrogate fails, x is drawn uniformly
/// from X and the step is flagged.
StepResult cep_step(const Trajectory& trajectory, const OptimizerConfig& cfg, std::size_t iteration);

/// cep_step with a caller-supplied matrix.
StepResult cep_step_with_matrix(const Trajectory& trajectory, const ProjectionMatrix& A,
                                const OptimizerConfig& cfg, std::size_t iteration);

struct IterationRecord {
  double value = 0.0;  ///< maximization convention
  double best_so_far = 0.0;
  bool initial = false;
  bool surrogate_fallback = false;
  bool hyper_fallback = false;
  bool non_finite = false;
  Seed matrix_seed = 0;   ///< 0 for CEP initial-design points
  Eigen::VectorXd y;      ///< empty for CEP initial-design points
  std::size_t clamped_embedding = 0;
  std::size_t clamped_original = 0;
};

struct RunRecord {
  OptimizerConfig config;
  Trajectory trajectory{0};
  std::vector<double> best_so_far;  ///< length tN, non-decreasing
  std::vector<IterationRecord> iterations;
  double wall_seconds = 0.0;
};

/// Runs exactly cfg.tN evaluations of `objective` (maximized). Non-finite
/// objective values are recorded as −∞ and flagged; the run continues.
///
/// Baselines (REMBO/HeSBO) draw their matrix once, sample the initial design
/// uniformly in Y and evaluate at expand(A, y); the GP is trained on the
/// accumulated (y, f) pairs.
RunRecord run_optimizer(const Objective& objective, const OptimizerConfig& cfg);

/// Uniform random search in X with `evaluations` draws (reference baseline).
std::vector<double> random_search_best_so_far(const Objective& objective, std::size_t D,
                                              std::size_t evaluations, Seed seed);

}  // namespace cepbo
