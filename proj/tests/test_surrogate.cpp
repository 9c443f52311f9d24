#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "cepbo/error.hpp"
#include "cepbo/surrogate.hpp"
#include "oracles/gp_oracle.hpp"

using namespace cepbo;

namespace {

EmbeddedDataset random_dataset(std::size_t n, std::size_t d, Rng& rng) {
  EmbeddedDataset data;
  data.points.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  data.values.resize(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < data.points.size(); ++i) data.points.data()[i] = rng.uniform(-1, 1);
  for (Eigen::Index i = 0; i < data.values.size(); ++i) data.values[i] = rng.uniform(-2, 2);
  return data;
}

GpHyperparams hyper(std::size_t d, double ell, double sf2, double sn2, double mean = 0.0) {
  GpHyperparams h;
  h.lengthscales = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(d), ell);
  h.signal_variance = sf2;
  h.noise_variance = sn2;
  h.constant_mean = mean;
  return h;
}

}  // namespace

TEST(Kernel, ClosedFormValue) {
  Eigen::VectorXd a(1), b(1);
  a << 0.0;
  b << 1.0;
  const auto h = hyper(1, 1.0, 1.0, 0.0);
  EXPECT_NEAR(kernel(a, b, h), 0.5239941088318203, 1e-15);
  EXPECT_EQ(kernel(a, b, h), kernel(b, a, h));
  EXPECT_EQ(kernel(a, a, hyper(1, 0.7, 2.5, 0.0)), 2.5);
}

TEST(Kernel, GramMatrixIsPsd) {
  Rng rng(1);
  for (int t = 0; t < 10; ++t) {
    const auto data = random_dataset(20, 3, rng);
    const Eigen::MatrixXd K = kernel_matrix(data.points, data.points, hyper(3, 0.4, 1.3, 0));
    const double min_eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(K).eigenvalues().minCoeff();
    EXPECT_GE(min_eig, -1e-8 * K.trace());
    EXPECT_LT((K - K.transpose()).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(Kernel, RejectsWrongLengthscaleCount) {
  Eigen::VectorXd a = Eigen::VectorXd::Zero(2);
  EXPECT_THROW(kernel(a, a, hyper(3, 1, 1, 0)), DimensionError);
}

TEST(Lml, MatchesDenseOracle) {
  Rng rng(2);
  for (int t = 0; t < 10; ++t) {
    const auto data = random_dataset(5, 2, rng);
    const auto h = hyper(2, 0.6, 1.5, 1e-3, 0.2);
    const GpPosterior post(data, h);
    const double ref = oracle::dense_lml(oracle::dense_gp(data, h, post.jitter()));
    EXPECT_NEAR(log_marginal_likelihood(data, h), ref, 1e-8 * std::max(1.0, std::abs(ref)));
  }
}

TEST(Lml, TranslationInvariant) {
  Rng rng(3);
  auto data = random_dataset(8, 2, rng);
  const auto h = hyper(2, 0.5, 1.0, 1e-3, 0.1);
  const double base = log_marginal_likelihood(data, h);
  data.values.array() += 7.5;
  auto h2 = h;
  h2.constant_mean += 7.5;
  EXPECT_NEAR(log_marginal_likelihood(data, h2), base, 1e-9);
}

TEST(Factorize, ThrowsWhenIndefinite) {
  Eigen::MatrixXd K(2, 2);
  K << 1, 2, 2, 1;
  EXPECT_THROW(factorize_kernel(K, 0.0), SurrogateFailure);
}

TEST(Fit, SinglePointGivesItsValueAsMean) {
  EmbeddedDataset data{Eigen::MatrixXd::Constant(1, 2, 0.3), Eigen::VectorXd::Constant(1, 4.2)};
  const auto fit = fit_hyperparameters(data, FitOptions{}, 1);
  EXPECT_NEAR(fit.hyper.constant_mean, 4.2, 1e-3);
  EXPECT_FALSE(fit.fallback);
}

TEST(Fit, DeterministicPerSeed) {
  Rng rng(4);
  const auto data = random_dataset(12, 3, rng);
  const auto a = fit_hyperparameters(data, FitOptions{}, 9);
  const auto b = fit_hyperparameters(data, FitOptions{}, 9);
  EXPECT_EQ(a.hyper.lengthscales, b.hyper.lengthscales);
  EXPECT_EQ(a.hyper.signal_variance, b.hyper.signal_variance);
  EXPECT_EQ(a.hyper.noise_variance, b.hyper.noise_variance);
  EXPECT_EQ(a.log_likelihood, b.log_likelihood);
}

TEST(Fit, StaysInsideBounds) {
  Rng rng(5);
  for (int t = 0; t < 5; ++t) {
    const auto data = random_dataset(10, 2, rng);
    FitOptions opt;
    opt.axis_width = Eigen::VectorXd::Constant(2, 2.0);
    const auto fit = fit_hyperparameters(data, opt, t);
    const auto b = hyperparam_bounds(data, *opt.axis_width);
    const double eps = 1e-9;
    for (Eigen::Index k = 0; k < 2; ++k) {
      EXPECT_GE(std::log(fit.hyper.lengthscales[k]), b.log_lengthscale_lo[k] - eps);
      EXPECT_LE(std::log(fit.hyper.lengthscales[k]), b.log_lengthscale_hi[k] + eps);
    }
    EXPECT_GE(std::log(fit.hyper.signal_variance), b.log_signal_lo - eps);
    EXPECT_LE(std::log(fit.hyper.signal_variance), b.log_signal_hi + eps);
    EXPECT_GE(std::log(fit.hyper.noise_variance), b.log_noise_lo - eps);
    EXPECT_LE(std::log(fit.hyper.noise_variance), b.log_noise_hi + eps);
  }
}

TEST(Fit, ReturnedLikelihoodIsTheDataLikelihood) {
  Rng rng(6);
  auto data = random_dataset(10, 2, rng);
  data.values *= 30.0;
  const auto fit = fit_hyperparameters(data, FitOptions{}, 2);
  EXPECT_NEAR(fit.log_likelihood, log_marginal_likelihood(data, fit.hyper),
              1e-6 * std::abs(fit.log_likelihood));
}

TEST(Fit, RecoversLengthscalesFromPriorDraw) {
  int recovered = 0;
  for (Seed s = 0; s < 10; ++s) {
    Rng rng(100 + s);
    EmbeddedDataset data;
    data.points.resize(30, 2);
    for (Eigen::Index i = 0; i < data.points.size(); ++i) data.points.data()[i] = rng.uniform(-1, 1);
    const auto truth = hyper(2, 0.5, 1.0, 0.0);
    Eigen::MatrixXd K = kernel_matrix(data.points, data.points, truth);
    K.diagonal().array() += 1e-8;
    const Eigen::MatrixXd L = K.llt().matrixL();
    Eigen::VectorXd z(30);
    for (int i = 0; i < 30; ++i) z[i] = rng.normal();
    data.values = L * z;
    FitOptions opt;
    opt.axis_width = Eigen::VectorXd::Constant(2, 2.0);
    const auto fit = fit_hyperparameters(data, opt, s);
    const bool ok = (fit.hyper.lengthscales.array() >= 0.25).all() &&
                    (fit.hyper.lengthscales.array() <= 1.0).all();
    if (ok) ++recovered;
  }
  EXPECT_GE(recovered, 8);
}

TEST(Posterior, CholeskyReconstructsKernel) {
  EmbeddedDataset data{Eigen::MatrixXd(2, 1), Eigen::VectorXd(2)};
  data.points << -1.0, 1.0;
  data.values << 0.5, -0.5;
  const auto h = hyper(1, 0.3, 1.0, 1e-4);
  const GpPosterior post(data, h);
  Eigen::MatrixXd K = kernel_matrix(data.points, data.points, h);
  K.diagonal().array() += h.noise_variance + post.jitter();
  const Eigen::MatrixXd L = post.cholesky_factor();
  EXPECT_LT((L * L.transpose() - K).norm(), 1e-10 * K.norm());
}

TEST(Posterior, DuplicateInputsFactorize) {
  EmbeddedDataset data{Eigen::MatrixXd::Constant(2, 2, 0.1), Eigen::VectorXd(2)};
  data.values << 1.0, 2.0;
  EXPECT_NO_THROW(GpPosterior(data, hyper(2, 0.5, 1.0, 1e-3)));
  data.values << 1.0, 1.0;
  const GpPosterior jittered(data, hyper(2, 0.5, 1.0, 0.0));
  EXPECT_GT(jittered.jitter(), 0.0);
}

TEST(Predict, InterpolatesTrainingPoints) {
  Rng rng(7);
  const auto data = random_dataset(6, 2, rng);
  const auto h = hyper(2, 0.5, 1.0, 0.0);
  const GpPosterior post(data, h);
  for (Eigen::Index i = 0; i < 6; ++i) {
    const auto p = post.predict(data.points.row(i).transpose());
    EXPECT_NEAR(p.mean, data.values[i], 1e-6);
    EXPECT_LT(p.variance, 1e-6 * h.signal_variance);
  }
}

TEST(Predict, RevertsToPriorFarAway) {
  Rng rng(8);
  const auto data = random_dataset(6, 2, rng);
  const auto h = hyper(2, 0.1, 2.0, 1e-4, 0.7);
  const GpPosterior post(data, h);
  const auto p = post.predict(Eigen::VectorXd::Constant(2, 5.0));
  EXPECT_NEAR(p.mean, 0.7, 1e-3);
  EXPECT_NEAR(p.variance, 2.0, 1e-3);
}

TEST(Predict, MatchesDenseOracle) {
  EmbeddedDataset data{Eigen::MatrixXd(3, 2), Eigen::VectorXd(3)};
  data.points << 0.0, 0.0, 0.5, -0.2, -0.4, 0.9;
  data.values << 1.0, -0.3, 0.8;
  const auto h = hyper(2, 0.7, 1.2, 1e-3, 0.25);
  const GpPosterior post(data, h);
  const auto dense = oracle::dense_gp(data, h, post.jitter());
  Rng rng(9);
  for (int t = 0; t < 20; ++t) {
    Eigen::VectorXd y(2);
    y << rng.uniform(-1, 1), rng.uniform(-1, 1);
    const auto p = post.predict(y);
    const auto ref = oracle::dense_predict(dense, y);
    EXPECT_NEAR(p.mean, ref.mean, 1e-8 * std::max(1.0, std::abs(ref.mean)));
    EXPECT_NEAR(p.variance, ref.variance, 1e-8 * h.signal_variance);
  }
}

TEST(Predict, VarianceBoundedEverywhere) {
  Rng rng(10);
  const auto data = random_dataset(15, 3, rng);
  const auto h = hyper(3, 0.4, 1.7, 1e-2);
  const GpPosterior post(data, h);
  Eigen::MatrixXd probes(500, 3);
  for (Eigen::Index i = 0; i < probes.size(); ++i) probes.data()[i] = rng.uniform(-2, 2);
  Eigen::VectorXd mean, var;
  post.predict_batch(probes, mean, var);
  EXPECT_TRUE((var.array() >= 0.0).all());
  EXPECT_TRUE((var.array() <= h.signal_variance + h.noise_variance).all());
}

TEST(Predict, RejectsWrongDimension) {
  Rng rng(11);
  const GpPosterior post(random_dataset(3, 2, rng), hyper(2, 1, 1, 1e-3));
  EXPECT_THROW(post.predict(Eigen::VectorXd::Zero(3)), DimensionError);
}

TEST(EmbedDataset, CondensesEveryPointWithoutDedup) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2, 4);
  A(0, 0) = 1.0;
  A(1, 1) = 1.0;
  const ProjectionMatrix P(MatrixKind::Gaussian, A, 0);
  Trajectory traj(4);
  Eigen::VectorXd x(4);
  x << 0.5, -0.5, 0.3, 0.1;
  traj.append(x, 1.0);
  traj.append(x, 2.0);
  const double r2 = std::sqrt(2.0);
  const auto data = embed_dataset(P, traj, BoxDomain::cube(2, -r2, r2));
  ASSERT_EQ(data.size(), 2u);
  EXPECT_NEAR(data.points(0, 0), 0.25, 1e-15);
  EXPECT_NEAR(data.points(0, 1), -0.25, 1e-15);
  EXPECT_EQ(data.points.row(0), data.points.row(1));
  EXPECT_EQ(data.values[1], 2.0);
}
