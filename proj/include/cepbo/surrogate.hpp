#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cstddef>
#include <optional>

#include "cepbo/box.hpp"
#include "cepbo/projection.hpp"
#include "cepbo/rng.hpp"
#include "cepbo/trajectory.hpp"

namespace cepbo {

/// Training data in the embedding space. Rows of `points` are inputs;
/// duplicate rows are allowed (clamping can collide distinct x).
struct EmbeddedDataset {
  Eigen::MatrixXd points;  ///< n × d
  Eigen::VectorXd values;  ///< n

  std::size_t size() const noexcept { return static_cast<std::size_t>(values.size()); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(points.cols()); }
};

/// y_i = condense(A, x_i, Y); values copied unchanged, order preserved.
EmbeddedDataset embed_dataset(const ProjectionMatrix& A, const Trajectory& trajectory,
                              const BoxDomain& Y);

struct GpHyperparams {
  Eigen::VectorXd lengthscales;  ///< one per embedding axis
  double signal_variance = 1.0;
  double noise_variance = 0.0;
  double constant_mean = 0.0;
};

/// Matérn-5/2 ARD kernel:
///   σ_f²·(1 + √5 r + 5r²/3)·exp(−√5 r),   r² = Σ ((a_i − b_i)/ℓ_i)².
double kernel(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const GpHyperparams& hyper);

/// Gram matrix K(A, B) under `kernel`; rows of A and B are points.
Eigen::MatrixXd kernel_matrix(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                              const GpHyperparams& hyper);

/// Relative jitter ladder: jitter = level · mean(diag K), level = 1e-8 … 1e-4.
inline constexpr double kJitterFloor = 1e-8;
inline constexpr double kJitterCeiling = 1e-4;

/// Cholesky factor of K + (noise + jitter)·I together with the jitter used.
struct KernelFactor {
  Eigen::LLT<Eigen::MatrixXd> llt;
  double jitter = 0.0;
};

/// Factors K + noise·I, escalating the jitter ×10 from the floor to the
/// ceiling. Throws SurrogateFailure if every level fails.
KernelFactor factorize_kernel(const Eigen::MatrixXd& K, double noise_variance);

/// −½ rᵀ(K+σₙ²I)⁻¹r − ½ log det(K+σₙ²I) − (n/2) log 2π,  r = f − m.
/// The jitter policy is applied to the factorization.
double log_marginal_likelihood(const EmbeddedDataset& data, const GpHyperparams& hyper);

/// Search box for fit_hyperparameters in log space (natural log).
struct HyperparamBounds {
  Eigen::VectorXd log_lengthscale_lo;
  Eigen::VectorXd log_lengthscale_hi;
  double log_signal_lo = 0.0;
  double log_signal_hi = 0.0;
  double log_noise_lo = 0.0;
  double log_noise_hi = 0.0;
};

/// Lengthscales ∈ [1e-3, 1e3]·axis width, signal variance ∈ [1e-6, 1e4]·var(f),
/// noise variance ∈ [1e-8, 1e-2]·var(f). var(f) falls back to 1 when the
/// targets are constant.
HyperparamBounds hyperparam_bounds(const EmbeddedDataset& data, const Eigen::VectorXd& axis_width);

struct FitOptions {
  std::size_t restarts = 5;
  /// LML evaluations allowed per restart of the coordinate search.
  std::size_t evaluations_per_restart = 250;
  /// Width of each embedding axis; defaults to the data range (1 if flat).
  std::optional<Eigen::VectorXd> axis_width;
};

struct FitResult {
  GpHyperparams hyper;
  double log_likelihood = 0.0;
  /// Every restart failed to factorize; `hyper` holds the defaults.
  bool fallback = false;
};

/// Maximizes the LML over log-lengthscales, log-signal and log-noise by
/// multi-start coordinate search; the constant mean is profiled out in
/// closed form (generalized least squares). Targets are standardized before
/// the search and the winner is mapped back to data units.
///
/// Restart 0 starts from the defaults (ℓ = 0.3·width, σ_f² = var f,
/// σₙ² = 1e-4·var f); later restarts start uniformly in log space over
/// ℓ ∈ [0.02, 2]·width, σ_f² ∈ [0.1, 10]·var f, σₙ² within bounds.
/// The winner is the highest final LML, ties going to the earlier restart.
/// Constant targets (including n = 1) skip the search and return the defaults.
FitResult fit_hyperparameters(const EmbeddedDataset& data, const FitOptions& options, Seed seed);

/// Defaults used when fitting fails entirely.
GpHyperparams default_hyperparams(const EmbeddedDataset& data, const Eigen::VectorXd& axis_width);

struct Prediction {
  double mean = 0.0;
  double variance = 0.0;  ///< latent-function variance, clamped to [0, σ_f² + σₙ²]
};

/// Factorized training state; read-only after construction.
class GpPosterior {
 public:
  GpPosterior(EmbeddedDataset data, GpHyperparams hyper);

  const EmbeddedDataset& data() const noexcept { return data_; }
  const GpHyperparams& hyper() const noexcept { return hyper_; }
  double jitter() const noexcept { return jitter_; }
  /// Lower-triangular L with L·Lᵀ = K + (noise + jitter)·I.
  Eigen::MatrixXd cholesky_factor() const { return factor_.matrixL(); }
  const Eigen::VectorXd& weights() const noexcept { return weights_; }

  Prediction predict(const Eigen::VectorXd& y) const;
  /// Predictions for every row of `points`.
  void predict_batch(const Eigen::MatrixXd& points, Eigen::VectorXd& mean,
                     Eigen::VectorXd& variance) const;

 private:
  EmbeddedDataset data_;
  GpHyperparams hyper_;
  Eigen::LLT<Eigen::MatrixXd> factor_;
  double jitter_ = 0.0;
  Eigen::VectorXd weights_;  ///< (K + σ²I)⁻¹ (f − m)
};

/// Throws SurrogateFailure when the kernel matrix cannot be factorized.
GpPosterior posterior(const EmbeddedDataset& data, const GpHyperparams& hyper);
Prediction predict(const GpPosterior& post, const Eigen::VectorXd& y);

}  // namespace cepbo
