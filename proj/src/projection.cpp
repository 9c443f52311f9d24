#include "cepbo/projection.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "cepbo/error.hpp"

namespace cepbo {
namespace {

void check_dims(std::size_t d, std::size_t D) {
  if (d == 0) throw ValidationError("embedding dimension d must be positive");
  if (d > D) {
    throw ValidationError("embedding dimension d=" + std::to_string(d) +
                          " exceeds original dimension D=" + std::to_string(D));
  }
}

// Upper bound on doubles held by one stacked chunk of sampled matrices.
constexpr std::size_t kStackBudget = std::size_t{4} << 20;
constexpr std::size_t kMaxBatches = 20;

}  // namespace

std::string_view to_string(MatrixKind kind) noexcept {
  return kind == MatrixKind::Gaussian ? "gaussian" : "hashing";
}

MatrixKind parse_matrix_kind(std::string_view text) {
  std::string lowered(text);
  std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lowered == "gaussian") return MatrixKind::Gaussian;
  if (lowered == "hashing") return MatrixKind::Hashing;
  throw ValidationError("unknown matrix kind '" + std::string(text) +
                        "' (expected gaussian or hashing)");
}

ProjectionMatrix::ProjectionMatrix(MatrixKind kind, Eigen::MatrixXd entries, Seed seed)
    : kind_(kind), entries_(std::move(entries)), seed_(seed) {
  check_dims(static_cast<std::size_t>(entries_.rows()), static_cast<std::size_t>(entries_.cols()));
}

ProjectionMatrix sample_gaussian_matrix(std::size_t d, std::size_t D, Seed seed) {
  check_dims(d, D);
  Rng rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  Eigen::MatrixXd entries(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(D));
  for (Eigen::Index i = 0; i < entries.rows(); ++i) {
    for (Eigen::Index j = 0; j < entries.cols(); ++j) entries(i, j) = scale * rng.normal();
  }
  return ProjectionMatrix(MatrixKind::Gaussian, std::move(entries), seed);
}

ProjectionMatrix sample_hashing_matrix(std::size_t d, std::size_t D, Seed seed) {
  check_dims(d, D);
  Rng rng(seed);
  Eigen::MatrixXd entries =
      Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(D));
  for (Eigen::Index j = 0; j < entries.cols(); ++j) {
    const auto row = static_cast<Eigen::Index>(rng.index(d));
    entries(row, j) = rng.coin() ? 1.0 : -1.0;
  }
  return ProjectionMatrix(MatrixKind::Hashing, std::move(entries), seed);
}

ProjectionMatrix sample_matrix(MatrixKind kind, std::size_t d, std::size_t D, Seed seed) {
  return kind == MatrixKind::Gaussian ? sample_gaussian_matrix(d, D, seed)
                                      : sample_hashing_matrix(d, D, seed);
}

Eigen::VectorXd condense_unclamped(const ProjectionMatrix& A, const Eigen::VectorXd& x) {
  if (static_cast<std::size_t>(x.size()) != A.original_dim()) {
    throw DimensionError("condense: point has dimension " + std::to_string(x.size()) +
                         ", matrix expects " + std::to_string(A.original_dim()));
  }
  const double shrink = 1.0 / std::sqrt(static_cast<double>(A.original_dim()));
  return shrink * (A.entries() * x);
}

Eigen::VectorXd expand_unclamped(const ProjectionMatrix& A, const Eigen::VectorXd& y) {
  if (static_cast<std::size_t>(y.size()) != A.embedding_dim()) {
    throw DimensionError("expand: point has dimension " + std::to_string(y.size()) +
                         ", matrix expects " + std::to_string(A.embedding_dim()));
  }
  const double grow = std::sqrt(static_cast<double>(A.original_dim()));
  return grow * (A.entries().transpose() * y);
}

Eigen::VectorXd condense(const ProjectionMatrix& A, const Eigen::VectorXd& x, const BoxDomain& Y) {
  if (Y.dim() != A.embedding_dim()) throw DimensionError("condense: embedding box dimension mismatch");
  return clamp_to_box(condense_unclamped(A, x), Y);
}

Eigen::VectorXd expand(const ProjectionMatrix& A, const Eigen::VectorXd& y, const BoxDomain& X) {
  if (X.dim() != A.original_dim()) throw DimensionError("expand: original box dimension mismatch");
  return clamp_to_box(expand_unclamped(A, y), X);
}

IsometryEstimate mc_isometry_check(MatrixKind kind, std::size_t d, std::size_t D,
                                   std::size_t n_samples, Seed seed) {
  check_dims(d, D);
  if (n_samples == 0) throw ValidationError("mc_isometry_check needs at least one sample");

  const auto dim = static_cast<Eigen::Index>(D);
  const std::size_t batches = std::min(n_samples, kMaxBatches);
  const std::size_t chunk = std::max<std::size_t>(1, kStackBudget / (d * D));

  // Only the lower triangle of the symmetric accumulators is maintained.
  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::MatrixXd running_mean = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::MatrixXd spread = Eigen::MatrixXd::Zero(dim, dim);  // Σ n_b (m_b − M)²
  double weight = 0.0;

  std::size_t next = 0;
  for (std::size_t b = 0; b < batches; ++b) {
    const std::size_t batch_size = n_samples / batches + (b < n_samples % batches ? 1 : 0);
    Eigen::MatrixXd batch_sum = Eigen::MatrixXd::Zero(dim, dim);
    for (std::size_t done = 0; done < batch_size;) {
      const std::size_t take = std::min(chunk, batch_size - done);
      Eigen::MatrixXd stacked(static_cast<Eigen::Index>(take * d), dim);
      for (std::size_t s = 0; s < take; ++s) {
        const auto A = sample_matrix(kind, d, D, derive_seed(seed, Stream::MonteCarlo, next++));
        stacked.middleRows(static_cast<Eigen::Index>(s * d), static_cast<Eigen::Index>(d)) =
            A.entries();
      }
      batch_sum.selfadjointView<Eigen::Lower>().rankUpdate(stacked.transpose());
      done += take;
    }
    total += batch_sum;

    const double n_b = static_cast<double>(batch_size);
    weight += n_b;
    for (Eigen::Index j = 0; j < dim; ++j) {
      for (Eigen::Index i = j; i < dim; ++i) {
        const double m_b = batch_sum(i, j) / n_b;
        const double delta = m_b - running_mean(i, j);
        running_mean(i, j) += (n_b / weight) * delta;
        spread(i, j) += n_b * delta * (m_b - running_mean(i, j));
      }
    }
  }

  IsometryEstimate out;
  out.samples = n_samples;
  const double n = static_cast<double>(n_samples);
  out.max_standard_error = batches < 2 ? std::numeric_limits<double>::quiet_NaN() : 0.0;
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index i = j; i < dim; ++i) {
      const double mean = total(i, j) / n;
      const double dev = std::abs(mean - (i == j ? 1.0 : 0.0));
      out.max_abs_deviation = std::max(out.max_abs_deviation, dev);
      if (i == j) out.max_diag_deviation = std::max(out.max_diag_deviation, dev);
      if (batches >= 2) {
        const double per_sample_var = spread(i, j) / static_cast<double>(batches - 1);
        out.max_standard_error = std::max(out.max_standard_error, std::sqrt(per_sample_var / n));
      }
    }
  }
  return out;
}

double theorem_variance_bound(MatrixKind kind, std::size_t d, const Eigen::VectorXd& x,
                              const Eigen::VectorXd& g) {
  if (x.size() != g.size()) throw DimensionError("theorem_variance_bound: x and g differ in length");
  if (d == 0) throw ValidationError("embedding dimension d must be positive");
  const double inv_d = 1.0 / static_cast<double>(d);
  const double xx = x.squaredNorm();
  const double gg = g.squaredNorm();
  if (kind == MatrixKind::Gaussian) {
    const double gx = g.dot(x);
    return 3.0 * inv_d * xx * gg - inv_d * gx * gx;
  }
  const double cross = (x.array().square() * g.array().square()).sum();
  return inv_d * (gg * xx - cross);
}

VarianceEstimate mc_variance_check(MatrixKind kind, std::size_t d, std::size_t D,
                                   const Eigen::VectorXd& x, const Eigen::VectorXd& g,
                                   std::size_t n_samples, Seed seed) {
  check_dims(d, D);
  if (static_cast<std::size_t>(x.size()) != D || static_cast<std::size_t>(g.size()) != D) {
    throw DimensionError("mc_variance_check: x and g must have length D=" + std::to_string(D));
  }
  if (n_samples == 0) throw ValidationError("mc_variance_check needs at least one sample");

  const double target = g.dot(x);
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t s = 0; s < n_samples; ++s) {
    const auto A = sample_matrix(kind, d, D, derive_seed(seed, Stream::MonteCarlo, s));
    const Eigen::VectorXd ax = A.entries() * x;
    const Eigen::VectorXd ag = A.entries() * g;
    const double err = ag.dot(ax) - target;
    const double sq = err * err;
    const double delta = sq - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (sq - mean);
  }

  VarianceEstimate out;
  out.samples = n_samples;
  out.empirical_second_moment = mean;
  out.theorem_bound = theorem_variance_bound(kind, d, x, g);
  out.standard_error =
      n_samples < 2 ? std::numeric_limits<double>::quiet_NaN()
                    : std::sqrt(m2 / static_cast<double>(n_samples - 1) / static_cast<double>(n_samples));
  return out;
}

}  // namespace cepbo
