#include "cepbo/box.hpp"

#include <string>
#include <utility>

#include "cepbo/error.hpp"

namespace cepbo {

BoxDomain::BoxDomain(Eigen::VectorXd lower, Eigen::VectorXd upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size()) {
    throw DimensionError("box bounds have lengths " + std::to_string(lower_.size()) + " and " +
                         std::to_string(upper_.size()));
  }
  if (lower_.size() == 0) throw ValidationError("box must have at least one axis");
  for (Eigen::Index i = 0; i < lower_.size(); ++i) {
    if (!(lower_[i] < upper_[i])) {
      throw ValidationError("box axis " + std::to_string(i) + " is degenerate");
    }
  }
}

BoxDomain BoxDomain::cube(std::size_t dim, double lo, double hi) {
  const auto n = static_cast<Eigen::Index>(dim);
  return BoxDomain(Eigen::VectorXd::Constant(n, lo), Eigen::VectorXd::Constant(n, hi));
}

bool BoxDomain::contains(const Eigen::VectorXd& z) const {
  if (z.size() != lower_.size()) return false;
  return (z.array() >= lower_.array()).all() && (z.array() <= upper_.array()).all();
}

Eigen::VectorXd BoxDomain::map_to(const BoxDomain& target, const Eigen::VectorXd& z) const {
  if (z.size() != lower_.size() || target.dim() != dim()) {
    throw DimensionError("affine box map: dimension mismatch");
  }
  const Eigen::ArrayXd t = (z - lower_).array() / (upper_ - lower_).array();
  return (target.lower().array() + t * (target.upper() - target.lower()).array()).matrix();
}

Eigen::VectorXd clamp_to_box(const Eigen::VectorXd& z, const BoxDomain& box) {
  if (static_cast<std::size_t>(z.size()) != box.dim()) {
    throw DimensionError("clamp_to_box: point has dimension " + std::to_string(z.size()) +
                         ", box has " + std::to_string(box.dim()));
  }
  return z.cwiseMax(box.lower()).cwiseMin(box.upper());
}

std::size_t count_outside(const Eigen::VectorXd& z, const BoxDomain& box) {
  if (static_cast<std::size_t>(z.size()) != box.dim()) {
    throw DimensionError("count_outside: dimension mismatch");
  }
  return static_cast<std::size_t>(
      ((z.array() < box.lower().array()) || (z.array() > box.upper().array())).count());
}

}  // namespace cepbo
