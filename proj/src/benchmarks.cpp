#include "cepbo/benchmarks.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "cepbo/error.hpp"

namespace cepbo {

std::string_view to_string(Direction direction) noexcept {
  return direction == Direction::Minimize ? "minimize" : "maximize";
}

double to_maximization(Direction direction, double value) noexcept {
  return direction == Direction::Minimize ? -value : value;
}

PerturbationCoeffs make_perturbation_coeffs(std::size_t D, Seed seed) {
  Rng rng(derive_seed(seed, Stream::Perturbation));
  PerturbationCoeffs c;
  const auto n = static_cast<Eigen::Index>(D);
  c.w.resize(n);
  c.b.resize(n);
  for (auto& v : c.w) v = rng.normal();
  for (auto& v : c.b) v = rng.normal();
  return c;
}

double holder_table(double u, double v) {
  const double radial = std::abs(1.0 - std::sqrt(u * u + v * v) / std::numbers::pi);
  return -std::abs(std::sin(u) * std::cos(v) * std::exp(radial));
}

namespace {

void require_length(const Eigen::VectorXd& z, const PerturbationCoeffs& c) {
  if (c.w.size() != z.size() || c.b.size() != z.size()) {
    throw DimensionError("perturbation coefficients have length " + std::to_string(c.b.size()) +
                         " for a point of dimension " + std::to_string(z.size()));
  }
}

}  // namespace

double modified_schwefel(const Eigen::VectorXd& z, const PerturbationCoeffs& coeffs) {
  require_length(z, coeffs);
  double sum = 0.0;
  double prod = 1.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double s = z[i] - coeffs.b[i];
    sum += s * s / 4000.0;
    prod *= std::cos(s / std::sqrt(static_cast<double>(i + 1)));
  }
  return sum - prod + 1.0;
}

double modified_griewank(const Eigen::VectorXd& z, const PerturbationCoeffs& coeffs) {
  require_length(z, coeffs);
  double sum = 0.0;
  double prod = 1.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double s = z[i] - coeffs.b[i];
    sum += coeffs.w[i] * s * s;
    prod *= std::cos(z[i] / std::sqrt(static_cast<double>(i + 1)));
  }
  return sum - prod;
}

double hartmann6(const Eigen::VectorXd& u) {
  if (u.size() < 6) throw DimensionError("hartmann6 needs six coordinates");
  static constexpr double kAlpha[4] = {1.0, 1.2, 3.0, 3.2};
  static constexpr double kA[4][6] = {{10.0, 3.0, 17.0, 3.5, 1.7, 8.0},
                                      {0.05, 10.0, 17.0, 0.1, 8.0, 14.0},
                                      {3.0, 3.5, 1.7, 10.0, 17.0, 8.0},
                                      {17.0, 8.0, 0.05, 10.0, 0.1, 14.0}};
  static constexpr double kP[4][6] = {{0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886},
                                      {0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991},
                                      {0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650},
                                      {0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381}};
  double total = 0.0;
  for (int i = 0; i < 4; ++i) {
    double inner = 0.0;
    for (int j = 0; j < 6; ++j) {
      const double diff = u[j] - kP[i][j];
      inner += kA[i][j] * diff * diff;
    }
    total += kAlpha[i] * std::exp(-inner);
  }
  return -total;
}

double holder_table_embedded(const Eigen::VectorXd& x) {
  if (x.size() < 2) throw DimensionError("holder_table_embedded needs at least two coordinates");
  return holder_table(10.0 * x[0], 10.0 * x[1]);
}

double hartmann6_embedded(const Eigen::VectorXd& x) {
  if (x.size() < 6) throw DimensionError("hartmann6_embedded needs at least six coordinates");
  const Eigen::VectorXd u = 0.5 * (x.head(6).array() + 1.0).matrix();
  return hartmann6(u);
}

const std::vector<BenchmarkInfo>& benchmark_registry() {
  static const std::vector<BenchmarkInfo> registry = {
      {"holder_table", 100, Direction::Minimize, 2, {2, 5, 10},
       "Holder Table on the first two axes, [-10,10]^2"},
      {"modified_schwefel", 100, Direction::Minimize, 0, {2, 5, 20},
       "shifted Griewank-form sum/product, [-5,5]^D"},
      {"modified_griewank", 100, Direction::Minimize, 0, {2, 5, 20},
       "weighted shifted quadratic minus cosine product, [-5,5]^D"},
      {"hartmann6", 1000, Direction::Minimize, 6, {6},
       "Hartmann-6 on the first six axes, [0,1]^6"},
      {"sphere", 10, Direction::Maximize, 0, {2}, "-||x||^2 on [-1,1]^D"},
  };
  return registry;
}

const BenchmarkInfo& find_benchmark(std::string_view name) {
  for (const auto& info : benchmark_registry()) {
    if (info.name == name) return info;
  }
  std::string known;
  for (const auto& info : benchmark_registry()) {
    if (!known.empty()) known += ", ";
    known += info.name;
  }
  throw ValidationError("unknown benchmark '" + std::string(name) + "' (known: " + known + ")");
}

namespace {

BoxDomain natural_domain_for(const std::string& name, std::size_t D) {
  if (name == "holder_table") return BoxDomain::cube(D, -10.0, 10.0);
  if (name == "hartmann6") return BoxDomain::cube(D, 0.0, 1.0);
  if (name == "sphere") return BoxDomain::cube(D, -1.0, 1.0);
  return BoxDomain::cube(D, -5.0, 5.0);
}

}  // namespace

Benchmark::Benchmark(std::string_view name, std::size_t D, Seed perturbation_seed,
                     bool permute_coordinates)
    : info_(&find_benchmark(name)),
      D_(D),
      perturbation_seed_(perturbation_seed),
      natural_(natural_domain_for(info_->name, D == 0 ? 1 : D)) {
  if (D == 0) throw ValidationError("benchmark dimension D must be positive");
  if (info_->effective_dim > D) {
    throw ValidationError(info_->name + " needs D >= " + std::to_string(info_->effective_dim));
  }
  if (info_->name == "modified_schwefel" || info_->name == "modified_griewank") {
    coeffs_ = make_perturbation_coeffs(D, perturbation_seed);
  }
  if (permute_coordinates) {
    permutation_.resize(D);
    std::iota(permutation_.begin(), permutation_.end(), std::size_t{0});
    Rng rng(derive_seed(perturbation_seed, Stream::Permutation));
    for (std::size_t i = D; i > 1; --i) std::swap(permutation_[i - 1], permutation_[rng.index(i)]);
  }
}

double Benchmark::evaluate(const Eigen::VectorXd& x) const {
  if (static_cast<std::size_t>(x.size()) != D_) {
    throw DimensionError(info_->name + " expects dimension " + std::to_string(D_) + ", got " +
                         std::to_string(x.size()));
  }
  Eigen::VectorXd ordered = x;
  if (!permutation_.empty()) {
    for (std::size_t i = 0; i < D_; ++i) {
      ordered[static_cast<Eigen::Index>(i)] = x[static_cast<Eigen::Index>(permutation_[i])];
    }
  }
  const std::string& name = info_->name;
  if (name == "holder_table") return holder_table_embedded(ordered);
  if (name == "hartmann6") return hartmann6_embedded(ordered);
  if (name == "sphere") return -ordered.squaredNorm();
  const Eigen::VectorXd z = BoxDomain::cube(D_, -1.0, 1.0).map_to(natural_, ordered);
  if (name == "modified_schwefel") return modified_schwefel(z, *coeffs_);
  return modified_griewank(z, *coeffs_);
}

}  // namespace cepbo
