#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <vector>

namespace cepbo {

struct Observation {
  Eigen::VectorXd x;
  double value = 0.0;  ///< maximization convention; −∞ marks a non-finite evaluation
};

/// Append-only record of evaluated points in the original space, in
/// evaluation order.
class Trajectory {
 public:
  explicit Trajectory(std::size_t dim) : dim_(dim) {}

  /// Throws DimensionError if x does not have the trajectory dimension.
  void append(Eigen::VectorXd x, double value);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  const Observation& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<Observation>& points() const noexcept { return points_; }

  /// Largest recorded value; −∞ when empty.
  double best_value() const noexcept;

 private:
  std::size_t dim_;
  std::vector<Observation> points_;
};

}  // namespace cepbo
