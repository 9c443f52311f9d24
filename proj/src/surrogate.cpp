#include "cepbo/surrogate.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "cepbo/error.hpp"

namespace cepbo {

EmbeddedDataset embed_dataset(const ProjectionMatrix& A, const Trajectory& trajectory,
                              const BoxDomain& Y) {
  if (trajectory.empty()) throw ValidationError("embed_dataset: trajectory is empty");
  if (trajectory.dim() != A.original_dim()) {
    throw DimensionError("embed_dataset: trajectory dimension " + std::to_string(trajectory.dim()) +
                         " does not match matrix D=" + std::to_string(A.original_dim()));
  }
  const auto n = static_cast<Eigen::Index>(trajectory.size());
  EmbeddedDataset out;
  out.points.resize(n, static_cast<Eigen::Index>(A.embedding_dim()));
  out.values.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& obs = trajectory[static_cast<std::size_t>(i)];
    out.points.row(i) = condense(A, obs.x, Y).transpose();
    out.values[i] = obs.value;
  }
  return out;
}

namespace {

constexpr double kSqrt5 = 2.23606797749978969640917366873128;

double matern52_from_r2(double r2, double signal_variance) {
  const double r = std::sqrt(r2);
  return signal_variance * (1.0 + kSqrt5 * r + (5.0 / 3.0) * r2) * std::exp(-kSqrt5 * r);
}

void check_hyper(const GpHyperparams& hyper, std::size_t dim) {
  if (static_cast<std::size_t>(hyper.lengthscales.size()) != dim) {
    throw DimensionError("hyperparameters carry " + std::to_string(hyper.lengthscales.size()) +
                         " lengthscales for inputs of dimension " + std::to_string(dim));
  }
}

}  // namespace

double kernel(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const GpHyperparams& hyper) {
  if (a.size() != b.size()) throw DimensionError("kernel: inputs differ in dimension");
  check_hyper(hyper, static_cast<std::size_t>(a.size()));
  const double r2 = ((a - b).array() / hyper.lengthscales.array()).square().sum();
  return matern52_from_r2(r2, hyper.signal_variance);
}

Eigen::MatrixXd kernel_matrix(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                              const GpHyperparams& hyper) {
  if (A.cols() != B.cols()) throw DimensionError("kernel_matrix: inputs differ in dimension");
  check_hyper(hyper, static_cast<std::size_t>(A.cols()));
  const Eigen::RowVectorXd inv_ell = hyper.lengthscales.cwiseInverse().transpose();
  const Eigen::MatrixXd As = A.array().rowwise() * inv_ell.array();
  const Eigen::MatrixXd Bs = B.array().rowwise() * inv_ell.array();
  Eigen::MatrixXd K(A.rows(), B.rows());
  for (Eigen::Index j = 0; j < B.rows(); ++j) {
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
      const double r2 = (As.row(i) - Bs.row(j)).squaredNorm();
      K(i, j) = matern52_from_r2(r2, hyper.signal_variance);
    }
  }
  return K;
}

KernelFactor factorize_kernel(const Eigen::MatrixXd& K, double noise_variance) {
  const double mean_diag = K.diagonal().mean();
  KernelFactor out;
  for (double level = kJitterFloor; level <= kJitterCeiling * (1.0 + 1e-9); level *= 10.0) {
    const double jitter = level * mean_diag;
    Eigen::MatrixXd M = K;
    M.diagonal().array() += noise_variance + jitter;
    out.llt.compute(M);
    if (out.llt.info() == Eigen::Success) {
      const auto diag = out.llt.matrixLLT().diagonal();
      if (diag.allFinite() && (diag.array() > 0.0).all()) {
        out.jitter = jitter;
        return out;
      }
    }
  }
  throw SurrogateFailure("kernel matrix not positive definite after jitter " +
                         std::to_string(kJitterCeiling) + "·mean(diag K)");
}

double log_marginal_likelihood(const EmbeddedDataset& data, const GpHyperparams& hyper) {
  if (data.size() == 0) throw ValidationError("log_marginal_likelihood: empty dataset");
  const Eigen::MatrixXd K = kernel_matrix(data.points, data.points, hyper);
  const KernelFactor factor = factorize_kernel(K, hyper.noise_variance);
  const Eigen::VectorXd residual = data.values.array() - hyper.constant_mean;
  const Eigen::VectorXd alpha = factor.llt.solve(residual);
  const double n = static_cast<double>(data.size());
  const double log_det = 2.0 * factor.llt.matrixLLT().diagonal().array().log().sum();
  return -0.5 * residual.dot(alpha) - 0.5 * log_det - 0.5 * n * std::log(2.0 * std::numbers::pi);
}

HyperparamBounds hyperparam_bounds(const EmbeddedDataset& data, const Eigen::VectorXd& axis_width) {
  if (static_cast<std::size_t>(axis_width.size()) != data.dim()) {
    throw DimensionError("hyperparam_bounds: axis width dimension mismatch");
  }
  double var = 1.0;
  if (data.size() > 1) {
    const double mu = data.values.mean();
    const double v = (data.values.array() - mu).square().mean();
    if (v > 0.0 && std::isfinite(v)) var = v;
  }
  HyperparamBounds b;
  const Eigen::ArrayXd log_w = axis_width.array().log();
  b.log_lengthscale_lo = (log_w + std::log(1e-3)).matrix();
  b.log_lengthscale_hi = (log_w + std::log(1e3)).matrix();
  b.log_signal_lo = std::log(1e-6 * var);
  b.log_signal_hi = std::log(1e4 * var);
  b.log_noise_lo = std::log(1e-8 * var);
  b.log_noise_hi = std::log(1e-2 * var);
  return b;
}

GpHyperparams default_hyperparams(const EmbeddedDataset& data, const Eigen::VectorXd& axis_width) {
  GpHyperparams h;
  const double mu = data.size() > 0 ? data.values.mean() : 0.0;
  double var = 1.0;
  if (data.size() > 1) {
    const double v = (data.values.array() - mu).square().mean();
    if (v > 0.0 && std::isfinite(v)) var = v;
  }
  h.lengthscales = 0.3 * axis_width;
  h.signal_variance = var;
  h.noise_variance = 1e-4 * var;
  h.constant_mean = mu;
  return h;
}

namespace {

// LML of standardized data as a function of packed log-parameters
// [log ℓ_1 … log ℓ_d, log σ_f², log σ_n²], with the mean profiled out.
class ProfiledLikelihood {
 public:
  explicit ProfiledLikelihood(const EmbeddedDataset& data) : data_(data) {}

  struct Value {
    double lml = -std::numeric_limits<double>::infinity();
    double mean = 0.0;
  };

  Value operator()(const Eigen::VectorXd& params) const {
    const auto d = static_cast<Eigen::Index>(data_.dim());
    GpHyperparams h;
    h.lengthscales = params.head(d).array().exp().matrix();
    h.signal_variance = std::exp(params[d]);
    h.noise_variance = std::exp(params[d + 1]);
    Value out;
    try {
      const Eigen::MatrixXd K = kernel_matrix(data_.points, data_.points, h);
      const KernelFactor factor = factorize_kernel(K, h.noise_variance);
      const Eigen::VectorXd ones = Eigen::VectorXd::Ones(data_.values.size());
      const Eigen::VectorXd k_inv_one = factor.llt.solve(ones);
      const Eigen::VectorXd k_inv_f = factor.llt.solve(data_.values);
      const double denom = ones.dot(k_inv_one);
      out.mean = denom > 0.0 ? ones.dot(k_inv_f) / denom : data_.values.mean();
      const Eigen::VectorXd residual = data_.values.array() - out.mean;
      const Eigen::VectorXd alpha = factor.llt.solve(residual);
      const double n = static_cast<double>(data_.size());
      const double log_det = 2.0 * factor.llt.matrixLLT().diagonal().array().log().sum();
      const double lml =
          -0.5 * residual.dot(alpha) - 0.5 * log_det - 0.5 * n * std::log(2.0 * std::numbers::pi);
      if (std::isfinite(lml)) out.lml = lml;
    } catch (const SurrogateFailure&) {
    }
    return out;
  }

 private:
  const EmbeddedDataset& data_;
};

struct SearchOutcome {
  Eigen::VectorXd params;
  ProfiledLikelihood::Value value;
};

// Compass search: per-coordinate steps, halved after a failed ± probe.
SearchOutcome compass_search(const ProfiledLikelihood& objective, Eigen::VectorXd start,
                             const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                             std::size_t budget) {
  constexpr double kInitialStep = 1.0;
  constexpr double kMinStep = 1e-3;
  SearchOutcome best{std::move(start), {}};
  best.value = objective(best.params);
  std::size_t used = 1;
  Eigen::VectorXd step = Eigen::VectorXd::Constant(best.params.size(), kInitialStep);

  while (used < budget && step.maxCoeff() >= kMinStep) {
    for (Eigen::Index k = 0; k < best.params.size() && used < budget; ++k) {
      if (step[k] < kMinStep) continue;
      bool improved = false;
      for (const double sign : {1.0, -1.0}) {
        if (used >= budget) break;
        Eigen::VectorXd trial = best.params;
        trial[k] = std::clamp(trial[k] + sign * step[k], lo[k], hi[k]);
        if (trial[k] == best.params[k]) continue;
        const auto value = objective(trial);
        ++used;
        if (value.lml > best.value.lml) {
          best.params = std::move(trial);
          best.value = value;
          improved = true;
          break;
        }
      }
      if (!improved) step[k] *= 0.5;
    }
  }
  return best;
}

}  // namespace

FitResult fit_hyperparameters(const EmbeddedDataset& data, const FitOptions& options, Seed seed) {
  if (data.size() == 0) throw ValidationError("fit_hyperparameters: empty dataset");
  const auto d = static_cast<Eigen::Index>(data.dim());

  Eigen::VectorXd width;
  if (options.axis_width) {
    width = *options.axis_width;
    if (width.size() != d) throw DimensionError("fit_hyperparameters: axis width dimension mismatch");
  } else {
    width = data.points.colwise().maxCoeff() - data.points.colwise().minCoeff();
    width = width.unaryExpr([](double w) { return w > 0.0 ? w : 1.0; });
  }

  const double mu = data.values.mean();
  // Constant targets carry no information about the hyperparameters.
  if ((data.values.array() == data.values[0]).all()) {
    FitResult flat;
    flat.hyper = default_hyperparams(data, width);
    flat.log_likelihood = log_marginal_likelihood(data, flat.hyper);
    return flat;
  }
  double scale = 1.0;
  if (data.size() > 1) {
    const double sd = std::sqrt((data.values.array() - mu).square().mean());
    if (sd > 0.0 && std::isfinite(sd)) scale = sd;
  }
  EmbeddedDataset standardized{data.points, (data.values.array() - mu) / scale};

  // Bounds of the standardized problem: var(f) = 1 there.
  const HyperparamBounds bounds = hyperparam_bounds(
      EmbeddedDataset{data.points, Eigen::VectorXd::Zero(data.values.size())}, width);
  Eigen::VectorXd lo(d + 2);
  Eigen::VectorXd hi(d + 2);
  lo << bounds.log_lengthscale_lo, bounds.log_signal_lo, bounds.log_noise_lo;
  hi << bounds.log_lengthscale_hi, bounds.log_signal_hi, bounds.log_noise_hi;

  const ProfiledLikelihood objective(standardized);
  Rng rng(seed);
  const std::size_t restarts = std::max<std::size_t>(1, options.restarts);

  bool found = false;
  SearchOutcome winner;
  for (std::size_t r = 0; r < restarts; ++r) {
    Eigen::VectorXd start(d + 2);
    if (r == 0) {
      start.head(d) = (0.3 * width).array().log().matrix();
      start[d] = 0.0;
      start[d + 1] = std::log(1e-4);
    } else {
      for (Eigen::Index k = 0; k < d; ++k) {
        start[k] = std::log(width[k]) + rng.uniform(std::log(0.02), std::log(2.0));
      }
      start[d] = rng.uniform(std::log(0.1), std::log(10.0));
      start[d + 1] = rng.uniform(lo[d + 1], hi[d + 1]);
    }
    start = start.cwiseMax(lo).cwiseMin(hi);
    auto outcome = compass_search(objective, std::move(start), lo, hi, options.evaluations_per_restart);
    if (std::isfinite(outcome.value.lml) && (!found || outcome.value.lml > winner.value.lml)) {
      winner = std::move(outcome);
      found = true;
    }
  }

  FitResult result;
  if (!found) {
    result.hyper = default_hyperparams(data, width);
    result.fallback = true;
    result.log_likelihood = -std::numeric_limits<double>::infinity();
    return result;
  }
  result.hyper.lengthscales = winner.params.head(d).array().exp().matrix();
  result.hyper.signal_variance = std::exp(winner.params[d]) * scale * scale;
  result.hyper.noise_variance = std::exp(winner.params[d + 1]) * scale * scale;
  result.hyper.constant_mean = winner.value.mean * scale + mu;
  result.log_likelihood = winner.value.lml - static_cast<double>(data.size()) * std::log(scale);
  return result;
}

GpPosterior::GpPosterior(EmbeddedDataset data, GpHyperparams hyper)
    : data_(std::move(data)), hyper_(std::move(hyper)) {
  if (data_.size() == 0) throw ValidationError("posterior: empty dataset");
  check_hyper(hyper_, data_.dim());
  const Eigen::MatrixXd K = kernel_matrix(data_.points, data_.points, hyper_);
  KernelFactor factor = factorize_kernel(K, hyper_.noise_variance);
  factor_ = std::move(factor.llt);
  jitter_ = factor.jitter;
  weights_ = factor_.solve((data_.values.array() - hyper_.constant_mean).matrix());
}

Prediction GpPosterior::predict(const Eigen::VectorXd& y) const {
  if (static_cast<std::size_t>(y.size()) != data_.dim()) {
    throw DimensionError("predict: point has dimension " + std::to_string(y.size()) +
                         ", model has " + std::to_string(data_.dim()));
  }
  Eigen::VectorXd mean;
  Eigen::VectorXd variance;
  predict_batch(y.transpose(), mean, variance);
  return {mean[0], variance[0]};
}

void GpPosterior::predict_batch(const Eigen::MatrixXd& points, Eigen::VectorXd& mean,
                                Eigen::VectorXd& variance) const {
  if (static_cast<std::size_t>(points.cols()) != data_.dim()) {
    throw DimensionError("predict_batch: dimension mismatch");
  }
  const Eigen::MatrixXd cross = kernel_matrix(data_.points, points, hyper_);  // n × m
  mean = (cross.transpose() * weights_).array() + hyper_.constant_mean;
  const Eigen::MatrixXd v = factor_.matrixL().solve(cross);
  const double cap = hyper_.signal_variance + hyper_.noise_variance;
  variance = (hyper_.signal_variance - v.colwise().squaredNorm().array())
                 .max(0.0)
                 .min(cap)
                 .matrix()
                 .transpose();
}

GpPosterior posterior(const EmbeddedDataset& data, const GpHyperparams& hyper) {
  return GpPosterior(data, hyper);
}

Prediction predict(const GpPosterior& post, const Eigen::VectorXd& y) { return post.predict(y); }

}  // namespace cepbo
