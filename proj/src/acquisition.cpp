#include "cepbo/acquisition.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "cepbo/error.hpp"

namespace cepbo {

double normal_pdf(double z) noexcept {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_cdf(double z) noexcept { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double expected_improvement(double mean, double variance, Incumbent incumbent) noexcept {
  const double gap = mean - incumbent.best_value;
  const double sigma = std::sqrt(std::max(variance, 0.0));
  if (!(sigma > 0.0)) return std::max(gap, 0.0);
  const double z = gap / sigma;
  return std::max(gap * normal_cdf(z) + sigma * normal_pdf(z), 0.0);
}

namespace {

constexpr std::array<unsigned, 64> kPrimes = {
    2,   3,   5,   7,   11,  13,  17,  19,  23,  29,  31,  37,  41,  43,  47,  53,
    59,  61,  67,  71,  73,  79,  83,  89,  97,  101, 103, 107, 109, 113, 127, 131,
    137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223,
    227, 229, 233, 239, 241, 251, 257, 263, 269, 271, 277, 281, 283, 293, 307, 311};

double radical_inverse(std::size_t index, unsigned base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= base;
  }
  return result;
}

}  // namespace

Eigen::MatrixXd shifted_halton(std::size_t count, const BoxDomain& box, Seed seed) {
  const std::size_t dim = box.dim();
  if (dim > kPrimes.size()) {
    throw ValidationError("shifted_halton supports at most " + std::to_string(kPrimes.size()) +
                          " axes");
  }
  Rng rng(seed);
  Eigen::VectorXd shift(static_cast<Eigen::Index>(dim));
  for (auto& s : shift) s = rng.uniform();

  const Eigen::VectorXd lower = box.lower();
  const Eigen::VectorXd width = box.width();
  Eigen::MatrixXd out(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t k = 0; k < dim; ++k) {
      double u = radical_inverse(i + 1, kPrimes[k]) + shift[static_cast<Eigen::Index>(k)];
      if (u >= 1.0) u -= 1.0;
      const auto r = static_cast<Eigen::Index>(i);
      const auto c = static_cast<Eigen::Index>(k);
      out(r, c) = std::min(lower[c] + u * width[c], box.upper()[c]);
    }
  }
  return out;
}

AcquisitionResult maximize_acquisition(const GpPosterior& post, Incumbent incumbent,
                                       const BoxDomain& Y, const AcquisitionOptions& options,
                                       Seed seed) {
  if (options.budget == 0) throw ValidationError("acquisition budget must be at least 1");
  if (Y.dim() != post.data().dim()) throw DimensionError("maximize_acquisition: box dimension mismatch");

  const Eigen::MatrixXd candidates = shifted_halton(options.budget, Y, seed);
  Eigen::VectorXd mean;
  Eigen::VectorXd variance;
  post.predict_batch(candidates, mean, variance);

  AcquisitionResult result;
  result.value = -1.0;
  for (Eigen::Index i = 0; i < candidates.rows(); ++i) {
    const double ei = expected_improvement(mean[i], variance[i], incumbent);
    if (ei > result.value) {
      result.value = ei;
      result.best_candidate_index = static_cast<std::size_t>(i);
    }
  }
  result.point = candidates.row(static_cast<Eigen::Index>(result.best_candidate_index)).transpose();
  if (options.budget == 1) return result;

  const Eigen::VectorXd width = Y.width();
  double step = options.initial_step_fraction;
  std::size_t used = 0;
  auto evaluate = [&](const Eigen::VectorXd& y) {
    ++used;
    const Prediction p = post.predict(y);
    return expected_improvement(p.mean, p.variance, incumbent);
  };
  while (used < options.refine_evaluations && step >= options.min_step_fraction) {
    bool improved = false;
    for (Eigen::Index k = 0; k < result.point.size() && used < options.refine_evaluations; ++k) {
      for (const double sign : {1.0, -1.0}) {
        if (used >= options.refine_evaluations) break;
        Eigen::VectorXd trial = result.point;
        trial[k] += sign * step * width[k];
        trial = clamp_to_box(trial, Y);
        if (trial[k] == result.point[k]) continue;
        const double ei = evaluate(trial);
        if (ei > result.value) {
          result.value = ei;
          result.point = std::move(trial);
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= options.shrink;
  }
  return result;
}

}  // namespace cepbo
