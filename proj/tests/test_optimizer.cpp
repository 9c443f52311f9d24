#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <set>

#include "cepbo/benchmarks.hpp"
#include "cepbo/error.hpp"
#include "cepbo/optimizer.hpp"

using namespace cepbo;

namespace {

OptimizerConfig config(Algorithm a, std::size_t D, std::size_t d, std::size_t tN, Seed seed) {
  OptimizerConfig cfg;
  cfg.algorithm = a;
  cfg.D = D;
  cfg.d = d;
  cfg.t0 = d;
  cfg.tN = tN;
  cfg.seed = seed;
  return cfg;
}

const Algorithm kAll[] = {Algorithm::CepRembo, Algorithm::CepHesbo, Algorithm::Rembo,
                          Algorithm::Hesbo};

}  // namespace

TEST(Algorithm, NamesRoundTrip) {
  for (const Algorithm a : kAll) EXPECT_EQ(parse_algorithm(to_string(a)), a);
  EXPECT_EQ(parse_algorithm("cep-hesbo"), Algorithm::CepHesbo);
  EXPECT_THROW(parse_algorithm("TuRBO"), ValidationError);
  EXPECT_EQ(matrix_kind(Algorithm::Hesbo), MatrixKind::Hashing);
  EXPECT_TRUE(uses_fresh_matrix(Algorithm::CepRembo));
  EXPECT_FALSE(uses_fresh_matrix(Algorithm::Rembo));
}

TEST(InitializeDesign, ContainedAndDeterministic) {
  const auto X = BoxDomain::cube(2, -1, 1);
  const auto pts = initialize_design(3, X, 5);
  ASSERT_EQ(pts.size(), 3u);
  for (const auto& p : pts) EXPECT_TRUE(X.contains(p));
  const auto again = initialize_design(3, X, 5);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(pts[i], again[i]);
}

TEST(InitializeDesign, UniformMean) {
  const auto pts = initialize_design(10000, BoxDomain::cube(3, -1, 1), 6);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(3);
  for (const auto& p : pts) mean += p;
  mean /= 10000.0;
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(mean[k], 0.0, 0.04);
}

TEST(OptimizerConfig, Validation) {
  auto cfg = config(Algorithm::CepRembo, 10, 2, 5, 0);
  EXPECT_NO_THROW(cfg.validate());
  cfg.tN = cfg.t0;
  EXPECT_THROW(cfg.validate(), ValidationError);
  cfg = config(Algorithm::CepRembo, 3, 4, 10, 0);
  EXPECT_THROW(cfg.validate(), ValidationError);
  cfg = config(Algorithm::CepRembo, 3, 2, 10, 0);
  cfg.t0 = 0;
  EXPECT_THROW(cfg.validate(), ValidationError);
}

TEST(CepStep, ScalarSmoke) {
  Trajectory traj(1);
  traj.append(Eigen::VectorXd::Constant(1, 0.3), 1.0);
  const auto cfg = config(Algorithm::CepRembo, 1, 1, 3, 7);
  const ProjectionMatrix A(MatrixKind::Gaussian, Eigen::MatrixXd::Ones(1, 1), 0);
  const auto step = cep_step_with_matrix(traj, A, cfg, 1);
  EXPECT_TRUE(original_box(1).contains(step.x));
  EXPECT_GE(step.diagnostics.acquisition_value, 0.0);
  EXPECT_FALSE(step.diagnostics.surrogate_fallback);
}

TEST(CepStep, Deterministic) {
  Trajectory traj(20);
  for (const auto& x : initialize_design(4, original_box(20), 3)) traj.append(x, -x.squaredNorm());
  const auto cfg = config(Algorithm::CepHesbo, 20, 3, 10, 8);
  const auto a = cep_step(traj, cfg, 4);
  const auto b = cep_step(traj, cfg, 4);
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.diagnostics.y, b.diagnostics.y);
  EXPECT_NE(cep_step(traj, cfg, 5).diagnostics.matrix_seed, a.diagnostics.matrix_seed);
}

TEST(CepStep, EmptyTrajectoryRejected) {
  EXPECT_THROW(cep_step(Trajectory(5), config(Algorithm::CepRembo, 5, 2, 4, 0), 2), ValidationError);
}

TEST(CepStep, AllNonFiniteFallsBackToUniformPoint) {
  Trajectory traj(6);
  traj.append(Eigen::VectorXd::Zero(6), -std::numeric_limits<double>::infinity());
  const auto step = cep_step(traj, config(Algorithm::CepRembo, 6, 2, 4, 1), 1);
  EXPECT_TRUE(step.diagnostics.surrogate_fallback);
  EXPECT_TRUE(original_box(6).contains(step.x));
}

TEST(RunOptimizer, ReplayOracleForCepSteps) {
  const Benchmark g("modified_griewank", 100, 2);
  const Objective f = [&](const Eigen::VectorXd& x) { return g.evaluate_max(x); };
  for (const Algorithm a : {Algorithm::CepRembo, Algorithm::CepHesbo}) {
    const auto cfg = config(a, 100, 5, 15, 21);
    const auto rec = run_optimizer(f, cfg);
    std::set<Seed> seeds;
    for (std::size_t t = cfg.t0; t < cfg.tN; ++t) {
      const auto& it = rec.iterations[t];
      ASSERT_FALSE(it.surrogate_fallback);
      const auto A = sample_matrix(matrix_kind(a), 5, 100, it.matrix_seed);
      EXPECT_EQ(it.matrix_seed, step_matrix_seed(cfg.seed, t));
      EXPECT_EQ(rec.trajectory[t].x, expand(A, it.y, original_box(100)));
      seeds.insert(it.matrix_seed);
    }
    EXPECT_EQ(seeds.size(), cfg.tN - cfg.t0);
  }
}

TEST(RunOptimizer, BaselinesKeepTheirMatrix) {
  const Benchmark h("holder_table", 30, 0);
  const Objective f = [&](const Eigen::VectorXd& x) { return h.evaluate_max(x); };
  for (const Algorithm a : {Algorithm::Rembo, Algorithm::Hesbo}) {
    const auto cfg = config(a, 30, 2, 12, 3);
    const auto rec = run_optimizer(f, cfg);
    const auto A = sample_matrix(matrix_kind(a), 2, 30, rec.iterations.front().matrix_seed);
    for (std::size_t t = 0; t < cfg.tN; ++t) {
      EXPECT_EQ(rec.iterations[t].matrix_seed, rec.iterations.front().matrix_seed);
      EXPECT_EQ(rec.trajectory[t].x, expand(A, rec.iterations[t].y, original_box(30)));
    }
  }
}

TEST(RunOptimizer, InvariantsAcrossBenchmarks) {
  for (const char* name : {"holder_table", "modified_schwefel", "modified_griewank", "sphere"}) {
    const Benchmark b(name, 12, 5);
    for (const Algorithm a : kAll) {
      std::size_t calls = 0;
      const Objective f = [&](const Eigen::VectorXd& x) {
        ++calls;
        return b.evaluate_max(x);
      };
      const auto cfg = config(a, 12, 2, 9, 17);
      const auto rec = run_optimizer(f, cfg);
      EXPECT_EQ(calls, cfg.tN);
      ASSERT_EQ(rec.best_so_far.size(), cfg.tN);
      ASSERT_EQ(rec.trajectory.size(), cfg.tN);
      double running = -std::numeric_limits<double>::infinity();
      for (std::size_t t = 0; t < cfg.tN; ++t) {
        running = std::max(running, rec.trajectory[t].value);
        EXPECT_EQ(rec.best_so_far[t], running);
        EXPECT_TRUE(original_box(12).contains(rec.trajectory[t].x));
        EXPECT_EQ(rec.iterations[t].initial, t < cfg.t0);
      }
    }
  }
}

TEST(RunOptimizer, OneModelStepWhenTnIsT0PlusOne) {
  const Objective f = [](const Eigen::VectorXd& x) { return -x.squaredNorm(); };
  auto cfg = config(Algorithm::CepRembo, 8, 2, 3, 1);
  const auto rec = run_optimizer(f, cfg);
  EXPECT_EQ(rec.iterations.size(), 3u);
  EXPECT_FALSE(rec.iterations[2].initial);
  cfg.tN = 2;
  EXPECT_THROW(run_optimizer(f, cfg), ValidationError);
}

TEST(RunOptimizer, BitIdenticalReruns) {
  const Benchmark g("modified_griewank", 25, 1);
  const Objective f = [&](const Eigen::VectorXd& x) { return g.evaluate_max(x); };
  for (const Algorithm a : kAll) {
    const auto cfg = config(a, 25, 3, 10, 99);
    const auto r1 = run_optimizer(f, cfg);
    const auto r2 = run_optimizer(f, cfg);
    for (std::size_t t = 0; t < cfg.tN; ++t) {
      EXPECT_EQ(r1.trajectory[t].x, r2.trajectory[t].x);
      EXPECT_EQ(r1.trajectory[t].value, r2.trajectory[t].value);
    }
  }
}

TEST(RunOptimizer, NonFiniteValuesAreFlaggedAndSkipped) {
  std::size_t calls = 0;
  const Objective f = [&](const Eigen::VectorXd& x) {
    return (calls++ % 3 == 1) ? std::numeric_limits<double>::quiet_NaN() : -x.squaredNorm();
  };
  for (const Algorithm a : kAll) {
    calls = 0;
    const auto rec = run_optimizer(f, config(a, 6, 2, 10, 4));
    for (std::size_t t = 0; t < 10; ++t) {
      const bool bad = t % 3 == 1;
      EXPECT_EQ(rec.iterations[t].non_finite, bad);
      if (bad) EXPECT_EQ(rec.trajectory[t].value, -std::numeric_limits<double>::infinity());
      EXPECT_TRUE(std::isfinite(rec.best_so_far[t]));
    }
  }
}

TEST(RunOptimizer, CepBeatsRandomSearchOnSphere) {
  const Benchmark s("sphere", 10, 0);
  const Objective f = [&](const Eigen::VectorXd& x) { return s.evaluate_max(x); };
  for (const Algorithm a : {Algorithm::CepRembo, Algorithm::CepHesbo}) {
    int wins = 0;
    for (Seed seed = 0; seed < 10; ++seed) {
      const auto rec = run_optimizer(f, config(a, 10, 2, 30, 1000 + seed));
      if (rec.best_so_far.back() >= random_search_best_so_far(f, 10, 30, 1000 + seed).back()) ++wins;
    }
    EXPECT_GE(wins, 7) << to_string(a);
  }
}

TEST(RandomSearch, MonotoneAndSharesDesignStream) {
  const Objective f = [](const Eigen::VectorXd& x) { return -x.squaredNorm(); };
  const auto best = random_search_best_so_far(f, 4, 20, 3);
  ASSERT_EQ(best.size(), 20u);
  for (std::size_t i = 1; i < best.size(); ++i) EXPECT_GE(best[i], best[i - 1]);
  const auto design = initialize_design(1, original_box(4), derive_seed(3, Stream::Design));
  EXPECT_EQ(best[0], f(design[0]));
}
