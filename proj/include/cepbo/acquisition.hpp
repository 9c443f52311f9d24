#pragma once

#include <Eigen/Core>
#include <cstddef>

#include "cepbo/box.hpp"
#include "cepbo/rng.hpp"
#include "cepbo/surrogate.hpp"

namespace cepbo {

/// Best observed objective value (maximization convention).
struct Incumbent {
  double best_value = 0.0;
};

double normal_pdf(double z) noexcept;
double normal_cdf(double z) noexcept;

/// EI = (μ − best)·Φ(z) + σ·φ(z), z = (μ − best)/σ; max(μ − best, 0) when σ = 0.
double expected_improvement(double mean, double variance, Incumbent incumbent) noexcept;

struct AcquisitionOptions {
  /// Size of the low-discrepancy candidate set. A budget of one returns
  /// that single candidate without refinement.
  std::size_t budget = 1024;
  std::size_t refine_evaluations = 100;
  double initial_step_fraction = 0.1;  ///< first pattern step, relative to box width
  double shrink = 0.5;
  double min_step_fraction = 1e-4;
};

struct AcquisitionResult {
  Eigen::VectorXd point;
  double value = 0.0;                    ///< EI at `point`
  std::size_t best_candidate_index = 0;  ///< winner of the candidate sweep
};

/// `count` points of a Halton sequence, each axis shifted by an independent
/// uniform offset modulo 1 (Cranley–Patterson rotation), mapped onto `box`.
/// Rows are points. Supports up to 64 axes.
Eigen::MatrixXd shifted_halton(std::size_t count, const BoxDomain& box, Seed seed);

/// Sweeps the candidate set, keeps the highest EI (ties: lowest index), then
/// refines it by a bounded compass search inside the box.
AcquisitionResult maximize_acquisition(const GpPosterior& post, Incumbent incumbent,
                                       const BoxDomain& Y, const AcquisitionOptions& options,
                                       Seed seed);

}  // namespace cepbo
