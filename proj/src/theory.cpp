#include "cepbo/theory.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "cepbo/error.hpp"

namespace cepbo {

Eigen::VectorXd random_unit_vector(std::size_t D, Rng& rng) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(D));
  double norm = 0.0;
  do {
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.normal();
    norm = v.norm();
  } while (norm == 0.0);
  return v / norm;
}

bool variance_within_bound(const VarianceEstimate& est, double se_multiplier) {
  const double emp = est.empirical_second_moment;
  if (emp <= est.theorem_bound) return true;
  const double se = std::isfinite(est.standard_error) ? est.standard_error : 0.0;
  return emp <= est.theorem_bound * (1.0 + se_multiplier * se / emp);
}

TheoryReport validate_theory(const TheoryRequest& request, const TheoryThresholds& thresholds) {
  if (request.d == 0 || request.D == 0 || request.d > request.D)
    throw ValidationError("validate_theory: need 1 <= d <= D");
  if (request.isometry_samples == 0) throw ValidationError("validate_theory: samples must be > 0");

  TheoryReport report;
  report.request = request;
  report.thresholds = thresholds;

  report.isometry = mc_isometry_check(request.kind, request.d, request.D,
                                      request.isometry_samples, request.seed);
  report.isometry_pass = report.isometry.max_abs_deviation < thresholds.isometry_tolerance;
  if (request.kind == MatrixKind::Hashing)
    report.isometry_pass = report.isometry_pass && report.isometry.max_diag_deviation == 0.0;

  if (request.e1_check && request.variance_samples > 0) {
    report.e1_checked = true;
    Eigen::VectorXd e1 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(request.D));
    e1[0] = 1.0;
    report.e1 = mc_variance_check(request.kind, request.d, request.D, e1, e1,
                                  request.variance_samples,
                                  derive_seed(request.seed, Stream::MonteCarlo, 0));
    if (request.kind == MatrixKind::Gaussian) {
      report.e1_expected = 2.0 / static_cast<double>(request.d);
      report.e1_pass = std::abs(report.e1.empirical_second_moment - report.e1_expected) <=
                       thresholds.e1_relative_tolerance * report.e1_expected;
    } else {
      report.e1_expected = 0.0;
      report.e1_pass = report.e1.empirical_second_moment == 0.0;
    }
  }

  if (request.variance_samples > 0) {
    for (std::size_t p = 0; p < request.pairs; ++p) {
      Rng rng(derive_seed(request.seed, Stream::TheoryVectors, p));
      VariancePair pair;
      pair.x = random_unit_vector(request.D, rng);
      pair.g = random_unit_vector(request.D, rng);
      pair.estimate = mc_variance_check(request.kind, request.d, request.D, pair.x, pair.g,
                                        request.variance_samples,
                                        derive_seed(request.seed, Stream::MonteCarlo, p + 1));
      pair.pass = variance_within_bound(pair.estimate, thresholds.se_multiplier);
      if (pair.pass) ++report.pairs_passed;
      report.pairs.push_back(std::move(pair));
    }
  }
  return report;
}

std::string format_theory_report(const TheoryReport& r) {
  std::ostringstream out;
  char buf[256];
  const auto& q = r.request;
  std::snprintf(buf, sizeof buf, "kind=%s d=%zu D=%zu seed=%llu\n",
                std::string(to_string(q.kind)).c_str(), q.d, q.D,
                static_cast<unsigned long long>(q.seed));
  out << buf;
  std::snprintf(buf, sizeof buf,
                "isometry: samples=%zu max|mean(A^T A) - I|=%.6g diag=%.6g max_se=%.3g "
                "threshold=%.3g  %s\n",
                r.isometry.samples, r.isometry.max_abs_deviation, r.isometry.max_diag_deviation,
                r.isometry.max_standard_error, r.thresholds.isometry_tolerance,
                r.isometry_pass ? "PASS" : "FAIL");
  out << buf;
  if (r.e1_checked) {
    std::snprintf(buf, sizeof buf,
                  "e1 second moment: empirical=%.6g se=%.3g expected=%.6g bound=%.6g  %s\n",
                  r.e1.empirical_second_moment, r.e1.standard_error, r.e1_expected,
                  r.e1.theorem_bound, r.e1_pass ? "PASS" : "FAIL");
    out << buf;
  }
  for (std::size_t p = 0; p < r.pairs.size(); ++p) {
    const auto& e = r.pairs[p].estimate;
    std::snprintf(buf, sizeof buf,
                  "pair %2zu: g^T x=% .4f empirical=%.6g se=%.3g bound=%.6g ratio=%.4f  %s\n", p,
                  r.pairs[p].g.dot(r.pairs[p].x), e.empirical_second_moment, e.standard_error,
                  e.theorem_bound,
                  e.theorem_bound > 0 ? e.empirical_second_moment / e.theorem_bound : 0.0,
                  r.pairs[p].pass ? "PASS" : "FAIL");
    out << buf;
  }
  if (!r.pairs.empty()) {
    std::snprintf(buf, sizeof buf, "variance bound: %zu/%zu pairs within bound  %s\n",
                  r.pairs_passed, r.pairs.size(), r.variance_pass() ? "PASS" : "FAIL");
    out << buf;
  }
  out << "overall: " << (r.pass() ? "PASS" : "FAIL") << "\n";
  return out.str();
}

}  // namespace cepbo
