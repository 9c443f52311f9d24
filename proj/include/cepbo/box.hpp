#pragma once

#include <Eigen/Core>
#include <cstddef>

namespace cepbo {

/// Axis-aligned box [lower, upper]; every axis has lower < upper.
class BoxDomain {
 public:
  BoxDomain(Eigen::VectorXd lower, Eigen::VectorXd upper);

  /// [lo, hi]^dim
  static BoxDomain cube(std::size_t dim, double lo, double hi);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(lower_.size()); }
  const Eigen::VectorXd& lower() const noexcept { return lower_; }
  const Eigen::VectorXd& upper() const noexcept { return upper_; }
  Eigen::VectorXd width() const { return upper_ - lower_; }
  bool contains(const Eigen::VectorXd& z) const;

  /// Affine bijection sending this box onto `target`, corner to corner.
  Eigen::VectorXd map_to(const BoxDomain& target, const Eigen::VectorXd& z) const;

 private:
  Eigen::VectorXd lower_;
  Eigen::VectorXd upper_;
};

/// Euclidean projection onto the box. For an axis-aligned box the arg-min
/// separates per coordinate, so this is a componentwise clamp.
Eigen::VectorXd clamp_to_box(const Eigen::VectorXd& z, const BoxDomain& box);

/// Number of coordinates of `z` lying outside the box.
std::size_t count_outside(const Eigen::VectorXd& z, const BoxDomain& box);

}  // namespace cepbo
