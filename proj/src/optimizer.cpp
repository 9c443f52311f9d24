#include "cepbo/optimizer.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>

#include "cepbo/error.hpp"

namespace cepbo {

std::string_view to_string(Algorithm algorithm) noexcept {
  switch (algorithm) {
    case Algorithm::CepRembo: return "CEP-REMBO";
    case Algorithm::CepHesbo: return "CEP-HeSBO";
    case Algorithm::Rembo: return "REMBO";
    case Algorithm::Hesbo: return "HeSBO";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view text) {
  std::string upper(text);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (upper == "CEP-REMBO") return Algorithm::CepRembo;
  if (upper == "CEP-HESBO") return Algorithm::CepHesbo;
  if (upper == "REMBO") return Algorithm::Rembo;
  if (upper == "HESBO") return Algorithm::Hesbo;
  throw ValidationError("unknown algorithm '" + std::string(text) +
                        "' (known: CEP-REMBO, CEP-HeSBO, REMBO, HeSBO)");
}

MatrixKind matrix_kind(Algorithm algorithm) noexcept {
  return (algorithm == Algorithm::CepRembo || algorithm == Algorithm::Rembo) ? MatrixKind::Gaussian
                                                                             : MatrixKind::Hashing;
}

bool uses_fresh_matrix(Algorithm algorithm) noexcept {
  return algorithm == Algorithm::CepRembo || algorithm == Algorithm::CepHesbo;
}

void OptimizerConfig::validate() const {
  if (d == 0) throw ValidationError("d must be at least 1");
  if (d > D) {
    throw ValidationError("d=" + std::to_string(d) + " exceeds D=" + std::to_string(D));
  }
  if (t0 == 0) throw ValidationError("t0 must be at least 1");
  if (t0 >= tN) {
    throw ValidationError("tN=" + std::to_string(tN) + " must exceed t0=" + std::to_string(t0));
  }
  if (acquisition_budget == 0) throw ValidationError("acquisition_budget must be at least 1");
}

BoxDomain original_box(std::size_t D) { return BoxDomain::cube(D, -1.0, 1.0); }

BoxDomain embedding_box(std::size_t d) {
  const double r = std::sqrt(static_cast<double>(d));
  return BoxDomain::cube(d, -r, r);
}

std::vector<Eigen::VectorXd> initialize_design(std::size_t t0, const BoxDomain& X, Seed seed) {
  Rng rng(seed);
  std::vector<Eigen::VectorXd> points;
  points.reserve(t0);
  for (std::size_t i = 0; i < t0; ++i) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(X.dim()));
    for (Eigen::Index k = 0; k < x.size(); ++k) x[k] = rng.uniform(X.lower()[k], X.upper()[k]);
    points.push_back(std::move(x));
  }
  return points;
}

Seed step_matrix_seed(Seed run_seed, std::size_t iteration) noexcept {
  return derive_seed(run_seed, Stream::Matrix, iteration);
}

namespace {

struct Proposal {
  Eigen::VectorXd y;
  double acquisition_value = 0.0;
  GpHyperparams hyper;
  bool hyper_fallback = false;
};

// Fits the GP on `data` and maximizes EI over Y. Empty result when the
// surrogate cannot be built.
std::optional<Proposal> propose(const EmbeddedDataset& data, const BoxDomain& Y,
                                const OptimizerConfig& cfg, std::size_t iteration) {
  if (data.size() == 0) return std::nullopt;
  try {
    FitOptions fit;
    fit.restarts = cfg.restarts;
    fit.axis_width = Y.width();
    const FitResult fitted =
        fit_hyperparameters(data, fit, derive_seed(cfg.seed, Stream::Hyperfit, iteration));
    const GpPosterior post(data, fitted.hyper);

    AcquisitionOptions acq;
    acq.budget = cfg.acquisition_budget;
    const Incumbent incumbent{data.values.maxCoeff()};
    const AcquisitionResult best = maximize_acquisition(
        post, incumbent, Y, acq, derive_seed(cfg.seed, Stream::Candidates, iteration));
    return Proposal{best.point, best.value, fitted.hyper, fitted.fallback};
  } catch (const SurrogateFailure&) {
    return std::nullopt;
  }
}

Eigen::VectorXd fallback_point(const BoxDomain& X, const OptimizerConfig& cfg, std::size_t iteration) {
  return initialize_design(1, X, derive_seed(cfg.seed, Stream::Fallback, iteration)).front();
}

void check_matrix(const ProjectionMatrix& A, const OptimizerConfig& cfg) {
  if (A.embedding_dim() != cfg.d || A.original_dim() != cfg.D) {
    throw DimensionError("projection matrix is " + std::to_string(A.embedding_dim()) + "x" +
                         std::to_string(A.original_dim()) + ", config expects " +
                         std::to_string(cfg.d) + "x" + std::to_string(cfg.D));
  }
}

}  // namespace

StepResult cep_step_with_matrix(const Trajectory& trajectory, const ProjectionMatrix& A,
                                const OptimizerConfig& cfg, std::size_t iteration) {
  if (trajectory.empty()) throw ValidationError("cep_step: trajectory is empty");
  check_matrix(A, cfg);
  const BoxDomain X = original_box(cfg.D);
  const BoxDomain Y = embedding_box(cfg.d);

  StepResult out;
  out.diagnostics.kind = A.kind();
  out.diagnostics.matrix_seed = A.seed();

  Trajectory finite(trajectory.dim());
  for (const auto& obs : trajectory.points()) {
    if (std::isfinite(obs.value)) finite.append(obs.x, obs.value);
  }

  std::optional<Proposal> proposal;
  if (!finite.empty()) {
    const EmbeddedDataset data = embed_dataset(A, finite, Y);
    for (const auto& obs : finite.points()) {
      out.diagnostics.clamped_embedding += count_outside(condense_unclamped(A, obs.x), Y);
    }
    proposal = propose(data, Y, cfg, iteration);
  }

  if (!proposal) {
    out.x = fallback_point(X, cfg, iteration);
    out.diagnostics.surrogate_fallback = true;
    return out;
  }
  const Eigen::VectorXd raw = expand_unclamped(A, proposal->y);
  out.diagnostics.clamped_original = count_outside(raw, X);
  out.x = clamp_to_box(raw, X);
  out.diagnostics.y = std::move(proposal->y);
  out.diagnostics.acquisition_value = proposal->acquisition_value;
  out.diagnostics.hyper = std::move(proposal->hyper);
  out.diagnostics.hyper_fallback = proposal->hyper_fallback;
  return out;
}

StepResult cep_step(const Trajectory& trajectory, const OptimizerConfig& cfg, std::size_t iteration) {
  const auto A = sample_matrix(matrix_kind(cfg.algorithm), cfg.d, cfg.D,
                               step_matrix_seed(cfg.seed, iteration));
  return cep_step_with_matrix(trajectory, A, cfg, iteration);
}

namespace {

class Evaluator {
 public:
  Evaluator(const Objective& objective, RunRecord& record)
      : objective_(objective), record_(record) {}

  IterationRecord& evaluate(Eigen::VectorXd x) {
    double value = objective_(x);
    IterationRecord it;
    if (!std::isfinite(value)) {
      value = -std::numeric_limits<double>::infinity();
      it.non_finite = true;
    }
    it.value = value;
    const double previous = record_.best_so_far.empty() ? -std::numeric_limits<double>::infinity()
                                                        : record_.best_so_far.back();
    it.best_so_far = std::max(previous, value);
    record_.best_so_far.push_back(it.best_so_far);
    record_.trajectory.append(std::move(x), value);
    record_.iterations.push_back(std::move(it));
    return record_.iterations.back();
  }

 private:
  const Objective& objective_;
  RunRecord& record_;
};

void copy_diagnostics(IterationRecord& it, StepDiagnostics&& diag) {
  it.surrogate_fallback = diag.surrogate_fallback;
  it.hyper_fallback = diag.hyper_fallback;
  it.matrix_seed = diag.matrix_seed;
  it.y = std::move(diag.y);
  it.clamped_embedding = diag.clamped_embedding;
  it.clamped_original = diag.clamped_original;
}

void run_cep(const Objective& objective, const OptimizerConfig& cfg, RunRecord& record) {
  Evaluator evaluator(objective, record);
  const BoxDomain X = original_box(cfg.D);
  for (auto& x : initialize_design(cfg.t0, X, derive_seed(cfg.seed, Stream::Design))) {
    evaluator.evaluate(std::move(x)).initial = true;
  }
  for (std::size_t t = cfg.t0; t < cfg.tN; ++t) {
    StepResult step = cep_step(record.trajectory, cfg, t);
    copy_diagnostics(evaluator.evaluate(std::move(step.x)), std::move(step.diagnostics));
  }
}

void run_fixed_embedding(const Objective& objective, const OptimizerConfig& cfg, RunRecord& record) {
  Evaluator evaluator(objective, record);
  const BoxDomain X = original_box(cfg.D);
  const BoxDomain Y = embedding_box(cfg.d);
  const auto A = sample_matrix(matrix_kind(cfg.algorithm), cfg.d, cfg.D, step_matrix_seed(cfg.seed, 0));

  std::vector<Eigen::VectorXd> ys;
  std::vector<double> values;
  auto record_point = [&](Eigen::VectorXd y) -> IterationRecord& {
    const Eigen::VectorXd raw = expand_unclamped(A, y);
    IterationRecord& it = evaluator.evaluate(clamp_to_box(raw, X));
    it.clamped_original = count_outside(raw, X);
    it.matrix_seed = A.seed();
    it.y = y;
    if (std::isfinite(it.value)) {
      ys.push_back(std::move(y));
      values.push_back(it.value);
    }
    return it;
  };

  for (auto& y : initialize_design(cfg.t0, Y, derive_seed(cfg.seed, Stream::Design))) {
    record_point(std::move(y)).initial = true;
  }
  for (std::size_t t = cfg.t0; t < cfg.tN; ++t) {
    EmbeddedDataset data;
    data.points.resize(static_cast<Eigen::Index>(ys.size()), static_cast<Eigen::Index>(cfg.d));
    data.values.resize(static_cast<Eigen::Index>(ys.size()));
    for (std::size_t i = 0; i < ys.size(); ++i) {
      data.points.row(static_cast<Eigen::Index>(i)) = ys[i].transpose();
      data.values[static_cast<Eigen::Index>(i)] = values[i];
    }
    const auto proposal = propose(data, Y, cfg, t);
    if (!proposal) {
      IterationRecord& it = evaluator.evaluate(fallback_point(X, cfg, t));
      it.surrogate_fallback = true;
      it.matrix_seed = A.seed();
      continue;
    }
    IterationRecord& it = record_point(proposal->y);
    it.hyper_fallback = proposal->hyper_fallback;
  }
}

}  // namespace

RunRecord run_optimizer(const Objective& objective, const OptimizerConfig& cfg) {
  cfg.validate();
  const auto started = std::chrono::steady_clock::now();
  RunRecord record;
  record.config = cfg;
  record.trajectory = Trajectory(cfg.D);
  record.best_so_far.reserve(cfg.tN);
  record.iterations.reserve(cfg.tN);

  if (uses_fresh_matrix(cfg.algorithm)) {
    run_cep(objective, cfg, record);
  } else {
    run_fixed_embedding(objective, cfg, record);
  }
  record.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return record;
}

std::vector<double> random_search_best_so_far(const Objective& objective, std::size_t D,
                                              std::size_t evaluations, Seed seed) {
  std::vector<double> best;
  best.reserve(evaluations);
  double current = -std::numeric_limits<double>::infinity();
  for (const auto& x : initialize_design(evaluations, original_box(D), derive_seed(seed, Stream::Design))) {
    const double v = objective(x);
    if (std::isfinite(v)) current = std::max(current, v);
    best.push_back(current);
  }
  return best;
}

}  // namespace cepbo
