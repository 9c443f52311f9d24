#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cepbo/projection.hpp"
#include "cepbo/rng.hpp"

namespace cepbo {

struct TheoryRequest {
  MatrixKind kind = MatrixKind::Gaussian;
  std::size_t d = 0;
  std::size_t D = 0;
  std::size_t isometry_samples = 20000;
  std::size_t variance_samples = 100000;
  std::size_t pairs = 20;  ///< random unit-norm (x, g) pairs; 0 skips the variance check
  bool e1_check = true;
  Seed seed = 0;
};

struct TheoryThresholds {
  double isometry_tolerance = 0.05;
  double se_multiplier = 3.0;
  double e1_relative_tolerance = 0.05;
};

struct VariancePair {
  Eigen::VectorXd x;
  Eigen::VectorXd g;
  VarianceEstimate estimate;
  bool pass = false;
};

struct TheoryReport {
  TheoryRequest request;
  TheoryThresholds thresholds;

  IsometryEstimate isometry;
  bool isometry_pass = false;

  bool e1_checked = false;
  VarianceEstimate e1;
  double e1_expected = 0.0;  ///< 2/d for Gaussian, 0 for hashing
  bool e1_pass = true;

  std::vector<VariancePair> pairs;
  std::size_t pairs_passed = 0;

  bool variance_pass() const noexcept { return pairs_passed == pairs.size(); }
  bool pass() const noexcept { return isometry_pass && e1_pass && variance_pass(); }
};

/// Random unit-norm vector in R^D; pair p of a report uses
/// derive_seed(seed, Stream::TheoryVectors, p) for x then g.
Eigen::VectorXd random_unit_vector(std::size_t D, Rng& rng);

/// Variance check acceptance: empirical ≤ bound·(1 + k·SE/empirical).
bool variance_within_bound(const VarianceEstimate& est, double se_multiplier);

/// Monte-Carlo checks of E[AᵀA] = I and of the second-moment bounds.
/// Isometry: max |mean(AᵀA) − I| below the tolerance, and for hashing the
/// diagonal deviation exactly 0. e₁ check: x = g = e₁ compared to 2/d
/// (Gaussian, relative) or 0 (hashing, exact).
TheoryReport validate_theory(const TheoryRequest& request,
                             const TheoryThresholds& thresholds = {});

std::string format_theory_report(const TheoryReport& report);

}  // namespace cepbo
