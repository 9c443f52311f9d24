#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <string_view>

#include "cepbo/box.hpp"
#include "cepbo/rng.hpp"

namespace cepbo {

enum class MatrixKind { Gaussian, Hashing };

std::string_view to_string(MatrixKind kind) noexcept;
/// Accepts "gaussian" / "hashing" (case-insensitive).
MatrixKind parse_matrix_kind(std::string_view text);

/// Random d×D projection matrix together with the seed that produced it.
///
/// Gaussian kind: i.i.d. N(0, 1/d) entries. Hashing kind (count sketch):
/// every column holds a single ±1 in a uniformly chosen row. Both are stored
/// dense; d·D stays in the low millions for every configured experiment.
class ProjectionMatrix {
 public:
  ProjectionMatrix(MatrixKind kind, Eigen::MatrixXd entries, Seed seed);

  MatrixKind kind() const noexcept { return kind_; }
  std::size_t embedding_dim() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
  std::size_t original_dim() const noexcept { return static_cast<std::size_t>(entries_.cols()); }
  Seed seed() const noexcept { return seed_; }
  const Eigen::MatrixXd& entries() const noexcept { return entries_; }

 private:
  MatrixKind kind_;
  Eigen::MatrixXd entries_;
  Seed seed_;
};

/// Entries are drawn row by row from Rng(seed). Rejects d == 0 or d > D.
ProjectionMatrix sample_gaussian_matrix(std::size_t d, std::size_t D, Seed seed);
/// For each column in order: row = index(d), then sign = coin().
ProjectionMatrix sample_hashing_matrix(std::size_t d, std::size_t D, Seed seed);
ProjectionMatrix sample_matrix(MatrixKind kind, std::size_t d, std::size_t D, Seed seed);

/// Condensing projection y = clamp_Y((1/√D)·A·x).
Eigen::VectorXd condense(const ProjectionMatrix& A, const Eigen::VectorXd& x, const BoxDomain& Y);
/// Expansion projection x̃ = clamp_X(√D·Aᵀ·y).
Eigen::VectorXd expand(const ProjectionMatrix& A, const Eigen::VectorXd& y, const BoxDomain& X);

/// Unclamped halves, used for clamp diagnostics.
Eigen::VectorXd condense_unclamped(const ProjectionMatrix& A, const Eigen::VectorXd& x);
Eigen::VectorXd expand_unclamped(const ProjectionMatrix& A, const Eigen::VectorXd& y);

// ---------------------------------------------------------------------------
// Monte-Carlo checks of the moment properties of AᵀA.
// Sample i uses the matrix seeded by derive_seed(seed, Stream::MonteCarlo, i).

struct IsometryEstimate {
  double max_abs_deviation = 0.0;   ///< max_ij |mean(AᵀA)_ij − I_ij|
  double max_diag_deviation = 0.0;  ///< same, restricted to i == j
  /// Largest batch-means standard error over all entries; NaN when fewer
  /// than two samples.
  double max_standard_error = 0.0;
  std::size_t samples = 0;
};

IsometryEstimate mc_isometry_check(MatrixKind kind, std::size_t d, std::size_t D,
                                   std::size_t n_samples, Seed seed);

struct VarianceEstimate {
  double empirical_second_moment = 0.0;  ///< mean of (gᵀAᵀAx − gᵀx)²
  double standard_error = 0.0;           ///< SE of that mean; NaN when n == 1
  double theorem_bound = 0.0;
  std::size_t samples = 0;
};

/// Gaussian: (3/d)‖x‖²‖g‖² − (1/d)(gᵀx)².
/// Hashing:  (1/d)(‖g‖²‖x‖² − Σ x_i² g_i²).
double theorem_variance_bound(MatrixKind kind, std::size_t d, const Eigen::VectorXd& x,
                              const Eigen::VectorXd& g);

VarianceEstimate mc_variance_check(MatrixKind kind, std::size_t d, std::size_t D,
                                   const Eigen::VectorXd& x, const Eigen::VectorXd& g,
                                   std::size_t n_samples, Seed seed);

}  // namespace cepbo
