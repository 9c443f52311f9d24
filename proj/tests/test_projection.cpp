#include <gtest/gtest.h>

#include <cmath>

#include "cepbo/box.hpp"
#include "cepbo/error.hpp"
#include "cepbo/projection.hpp"
#include "cepbo/theory.hpp"

using namespace cepbo;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (const double x : v) out[i++] = x;
  return out;
}

ProjectionMatrix coordinate_matrix() {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2, 4);
  A(0, 0) = 1.0;
  A(1, 1) = 1.0;
  return ProjectionMatrix(MatrixKind::Gaussian, A, 0);
}

}  // namespace

TEST(Clamp, SpecExamples) {
  const auto box2 = BoxDomain::cube(2, -1, 1);
  EXPECT_EQ(clamp_to_box(vec({0.2, -0.3}), box2), vec({0.2, -0.3}));
  EXPECT_EQ(clamp_to_box(vec({2, 0}), box2), vec({1, 0}));
  EXPECT_EQ(clamp_to_box(vec({-5, 3, 0.5}), BoxDomain::cube(3, -1, 1)), vec({-1, 1, 0.5}));
  EXPECT_EQ(count_outside(vec({-5, 3, 0.5}), BoxDomain::cube(3, -1, 1)), 2u);
}

TEST(Clamp, IdempotentAndNonExpansive) {
  Rng rng(11);
  const auto box = BoxDomain::cube(5, -1, 1);
  for (int t = 0; t < 500; ++t) {
    Eigen::VectorXd a(5), b(5);
    for (int i = 0; i < 5; ++i) {
      a[i] = rng.uniform(-3, 3);
      b[i] = rng.uniform(-3, 3);
    }
    const auto pa = clamp_to_box(a, box);
    EXPECT_EQ(clamp_to_box(pa, box), pa);
    EXPECT_TRUE(box.contains(pa));
    EXPECT_LE((pa - clamp_to_box(b, box)).norm(), (a - b).norm() + 1e-15);
  }
}

TEST(Clamp, DimensionMismatchThrows) {
  EXPECT_THROW(clamp_to_box(vec({1, 2}), BoxDomain::cube(3, -1, 1)), DimensionError);
}

TEST(Box, AffineMapSendsCornersToCorners) {
  const auto X = BoxDomain::cube(3, -1, 1);
  const BoxDomain N(vec({-10, 0, -5}), vec({10, 1, 5}));
  EXPECT_LT((X.map_to(N, X.lower()) - N.lower()).norm(), 1e-12);
  EXPECT_LT((X.map_to(N, X.upper()) - N.upper()).norm(), 1e-12);
  EXPECT_THROW(BoxDomain(vec({0}), vec({0})), ValidationError);
}

TEST(Condense, SpecExamples) {
  const auto A = coordinate_matrix();
  const double r2 = std::sqrt(2.0);
  const auto y = condense(A, vec({0.5, -0.5, 0.3, 0.1}), BoxDomain::cube(2, -r2, r2));
  EXPECT_NEAR(y[0], 0.25, 1e-15);
  EXPECT_NEAR(y[1], -0.25, 1e-15);
  EXPECT_EQ(condense(A, vec({4, 4, 0, 0}), BoxDomain::cube(2, -1, 1)), vec({1, 1}));
  const auto g = sample_gaussian_matrix(3, 10, 5);
  EXPECT_EQ(condense(g, Eigen::VectorXd::Zero(10), BoxDomain::cube(3, -1, 1)),
            Eigen::VectorXd::Zero(3));
}

TEST(Expand, SpecExamples) {
  const auto A = coordinate_matrix();
  const auto x = expand(A, vec({0.25, -0.25}), BoxDomain::cube(4, -1, 1));
  EXPECT_EQ(x, vec({0.5, -0.5, 0, 0}));
  EXPECT_EQ(expand(A, Eigen::VectorXd::Zero(2), BoxDomain::cube(4, -1, 1)),
            Eigen::VectorXd::Zero(4));
  const ProjectionMatrix a(MatrixKind::Gaussian, Eigen::MatrixXd::Constant(1, 1, 3.0), 0);
  EXPECT_EQ(expand(a, vec({0.2}), BoxDomain::cube(1, -1, 1))[0], 3.0 * 0.2);
  EXPECT_EQ(expand(a, vec({0.5}), BoxDomain::cube(1, -1, 1))[0], 1.0);
}

TEST(Expand, RejectsMismatchedDimensions) {
  const auto A = coordinate_matrix();
  EXPECT_THROW(expand(A, vec({1, 2, 3}), BoxDomain::cube(4, -1, 1)), DimensionError);
  EXPECT_THROW(condense(A, vec({1, 2}), BoxDomain::cube(2, -1, 1)), DimensionError);
}

TEST(GaussianMatrix, DeterministicPerSeed) {
  const auto a = sample_gaussian_matrix(2, 4, 7);
  const auto b = sample_gaussian_matrix(2, 4, 7);
  EXPECT_EQ(a.entries(), b.entries());
  EXPECT_NE(a.entries(), sample_gaussian_matrix(2, 4, 8).entries());
  EXPECT_THROW(sample_gaussian_matrix(5, 4, 1), ValidationError);
  EXPECT_THROW(sample_gaussian_matrix(0, 4, 1), ValidationError);
}

TEST(GaussianMatrix, EntryVarianceIsOneOverD) {
  const auto A = sample_gaussian_matrix(4, 20000, 3);
  const double var = A.entries().array().square().mean();
  EXPECT_NEAR(var, 0.25, 0.01);
}

TEST(HashingMatrix, OneSignedEntryPerColumn) {
  for (Seed s = 0; s < 20; ++s) {
    const auto A = sample_hashing_matrix(3, 50, s);
    for (Eigen::Index j = 0; j < 50; ++j) {
      const auto col = A.entries().col(j);
      EXPECT_EQ((col.array() != 0.0).count(), 1);
      EXPECT_EQ(col.cwiseAbs().sum(), 1.0);
    }
    const Eigen::MatrixXd AtA = A.entries().transpose() * A.entries();
    EXPECT_TRUE((AtA.diagonal().array() == 1.0).all());
  }
  const auto row = sample_hashing_matrix(1, 3, 123);
  EXPECT_TRUE((row.entries().cwiseAbs().array() == 1.0).all());
}

TEST(Isometry, HashingDiagonalExact) {
  const auto est = mc_isometry_check(MatrixKind::Hashing, 3, 40, 1, 9);
  EXPECT_EQ(est.max_diag_deviation, 0.0);
  EXPECT_TRUE(std::isnan(est.max_standard_error));
}

TEST(Isometry, SingleSampleMatchesDirectComputation) {
  const Seed seed = 77;
  const auto est = mc_isometry_check(MatrixKind::Gaussian, 2, 2, 1, seed);
  const auto A = sample_gaussian_matrix(2, 2, derive_seed(seed, Stream::MonteCarlo, 0));
  const Eigen::MatrixXd dev =
      A.entries().transpose() * A.entries() - Eigen::MatrixXd::Identity(2, 2);
  EXPECT_NEAR(est.max_abs_deviation, dev.cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Isometry, GaussianWithinCltBand) {
  const auto est = mc_isometry_check(MatrixKind::Gaussian, 5, 20, 20000, 1);
  EXPECT_LT(est.max_abs_deviation, 0.05);
  EXPECT_GT(est.max_standard_error, 0.0);
  EXPECT_EQ(est.samples, 20000u);
}

TEST(Variance, HashingUnitVectorIsExactlyZero) {
  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(30);
  e1[0] = 1.0;
  const auto est = mc_variance_check(MatrixKind::Hashing, 4, 30, e1, e1, 1000, 3);
  EXPECT_EQ(est.empirical_second_moment, 0.0);
  EXPECT_EQ(est.theorem_bound, 0.0);
}

TEST(Variance, GaussianUnitVectorMatchesChiSquare) {
  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(10);
  e1[0] = 1.0;
  const auto est = mc_variance_check(MatrixKind::Gaussian, 5, 10, e1, e1, 100000, 4);
  EXPECT_NEAR(est.empirical_second_moment, 0.4, 0.02);
  EXPECT_NEAR(est.theorem_bound, 0.4, 1e-15);
}

TEST(Variance, GaussianRandomPairsRespectBound) {
  Rng rng(5);
  for (int p = 0; p < 20; ++p) {
    const auto x = random_unit_vector(100, rng);
    const auto g = random_unit_vector(100, rng);
    const auto est = mc_variance_check(MatrixKind::Gaussian, 6, 100, x, g, 20000,
                                       derive_seed(5, Stream::MonteCarlo, p));
    EXPECT_TRUE(variance_within_bound(est, 3.0)) << "pair " << p;
  }
}

// The exact hashing moment is the printed bound plus
// (1/d)((gᵀx)² − Σ g_i² x_i²); Monte Carlo agrees with it.
TEST(Variance, HashingMatchesExactSecondMoment) {
  Rng rng(6);
  const std::size_t d = 3, D = 12;
  for (int p = 0; p < 5; ++p) {
    const auto x = random_unit_vector(D, rng);
    const auto g = random_unit_vector(D, rng);
    const auto est = mc_variance_check(MatrixKind::Hashing, d, D, x, g, 100000,
                                       derive_seed(6, Stream::MonteCarlo, p));
    const double cross = g.cwiseProduct(x).squaredNorm();
    const double exact = est.theorem_bound + (std::pow(g.dot(x), 2) - cross) / d;
    EXPECT_NEAR(est.empirical_second_moment, exact, 4.0 * est.standard_error + 1e-12);
  }
}

TEST(Variance, HashingBoundIsExceededWhenXEqualsG) {
  Eigen::VectorXd x(2);
  x << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(theorem_variance_bound(MatrixKind::Hashing, 1, x, x), 0.5, 1e-15);
  const auto est = mc_variance_check(MatrixKind::Hashing, 1, 2, x, x, 2000, 8);
  // d = 1: every column lands in the single row, gᵀAᵀAx − gᵀx = 2·s1·s2·x1·x2.
  EXPECT_NEAR(est.empirical_second_moment, 1.0, 1e-12);
}

TEST(Variance, GaussianBoundFormula) {
  Eigen::VectorXd x(3), g(3);
  x << 1, 2, 2;
  g << 0, 3, 4;
  EXPECT_NEAR(theorem_variance_bound(MatrixKind::Gaussian, 3, x, g),
              (3.0 / 3.0) * 9.0 * 25.0 - (1.0 / 3.0) * 196.0, 1e-12);
}
