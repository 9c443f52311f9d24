#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cepbo/box.hpp"
#include "cepbo/rng.hpp"

namespace cepbo {

enum class Direction { Minimize, Maximize };

std::string_view to_string(Direction direction) noexcept;

/// Negates minimization objectives so every optimizer maximizes. An
/// involution: applying it twice restores the value.
double to_maximization(Direction direction, double value) noexcept;

/// Shift/weight coefficients of the perturbed benchmarks, w_i, b_i ~ N(0,1).
struct PerturbationCoeffs {
  Eigen::VectorXd w;
  Eigen::VectorXd b;
};

/// Draws w (all D entries) then b from the perturbation stream of `seed`.
PerturbationCoeffs make_perturbation_coeffs(std::size_t D, Seed seed);

// Natural-domain formulas ---------------------------------------------------

/// −|sin u · cos v · exp(|1 − √(u²+v²)/π|)| on [−10, 10]².
double holder_table(double u, double v);

/// Σ (z_i − b_i)²/4000 − Π cos((z_i − b_i)/√i) + 1, i = 1..D, on [−5, 5]^D.
double modified_schwefel(const Eigen::VectorXd& z, const PerturbationCoeffs& coeffs);

/// Σ w_i (z_i − b_i)² − Π cos(z_i/√i), i = 1..D, on [−5, 5]^D.
double modified_griewank(const Eigen::VectorXd& z, const PerturbationCoeffs& coeffs);

/// Hartmann-6 on [0, 1]^6; global minimum ≈ −3.32237.
double hartmann6(const Eigen::VectorXd& u);

// Embedded forms on the canonical box X = [−1, 1]^D --------------------------

/// Holder Table on the first two coordinates, mapped onto [−10, 10]².
double holder_table_embedded(const Eigen::VectorXd& x);
/// Hartmann-6 on the first six coordinates, mapped onto [0, 1]^6.
double hartmann6_embedded(const Eigen::VectorXd& x);

struct BenchmarkInfo {
  std::string name;
  std::size_t default_D = 0;
  Direction direction = Direction::Minimize;
  std::size_t effective_dim = 0;  ///< 0 means every coordinate matters
  std::vector<std::size_t> default_d;
  std::string description;
};

/// holder_table, modified_schwefel, modified_griewank, hartmann6, sphere.
const std::vector<BenchmarkInfo>& benchmark_registry();
/// Throws ValidationError listing the registry if the name is unknown.
const BenchmarkInfo& find_benchmark(std::string_view name);

/// A registry benchmark instantiated at dimension D on X = [−1, 1]^D.
class Benchmark {
 public:
  /// With `permute_coordinates`, input coordinates are reordered by a
  /// permutation seeded from `perturbation_seed`, so the effective axes are
  /// no longer the leading ones.
  Benchmark(std::string_view name, std::size_t D, Seed perturbation_seed,
            bool permute_coordinates = false);

  const BenchmarkInfo& info() const noexcept { return *info_; }
  const std::string& name() const noexcept { return info_->name; }
  std::size_t dim() const noexcept { return D_; }
  Direction direction() const noexcept { return info_->direction; }
  Seed perturbation_seed() const noexcept { return perturbation_seed_; }
  const BoxDomain& natural_domain() const noexcept { return natural_; }
  const std::optional<PerturbationCoeffs>& coeffs() const noexcept { return coeffs_; }

  /// Objective value in the benchmark's own orientation. x must lie in X.
  double evaluate(const Eigen::VectorXd& x) const;
  /// to_maximization(direction, evaluate(x)).
  double evaluate_max(const Eigen::VectorXd& x) const {
    return to_maximization(direction(), evaluate(x));
  }

 private:
  const BenchmarkInfo* info_;
  std::size_t D_;
  Seed perturbation_seed_;
  BoxDomain natural_;
  std::optional<PerturbationCoeffs> coeffs_;
  std::vector<std::size_t> permutation_;  ///< empty = identity
};

}  // namespace cepbo
