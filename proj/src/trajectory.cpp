#include "cepbo/trajectory.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <utility>

#include "cepbo/error.hpp"

namespace cepbo {

void Trajectory::append(Eigen::VectorXd x, double value) {
  if (static_cast<std::size_t>(x.size()) != dim_) {
    throw DimensionError("trajectory expects points of dimension " + std::to_string(dim_) +
                         ", got " + std::to_string(x.size()));
  }
  points_.push_back({std::move(x), value});
}

double Trajectory::best_value() const noexcept {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& p : points_) best = std::max(best, p.value);
  return best;
}

}  // namespace cepbo
