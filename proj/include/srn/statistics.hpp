#pragma once

#include <cstdint>
#include <limits>
#include <string>

#include "srn/errors.hpp"
#include "srn/simulate.hpp"

namespace srn {

// Streaming central moments up to fourth order with exact pooling
// (Pebay's parallel update formulas).  merge() is the single code path:
// push(x) merges a singleton accumulator.
class RunningMoments {
 public:
  void push(double x) {
    RunningMoments one;
    one.n_ = 1;
    one.mean_ = x;
    merge(one);
  }

  void merge(const RunningMoments& b);

  std::uint64_t count() const { return n_; }
  double mean() const { return mean_; }
  double m2() const { return m2_; }
  double m3() const { return m3_; }
  double m4() const { return m4_; }

  // Unbiased sample variance (n >= 2).
  double sample_variance() const {
    return n_ >= 2 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
  }

  // Plain fourth standardized moment n * sum (y - mean)^4 / (sum (y - mean)^2)^2.
  // NaN when the samples are constant (m2 == 0).
  double kurtosis() const {
    if (m2_ <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    return static_cast<double>(n_) * m4_ / (m2_ * m2_);
  }

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double m3_ = 0.0;
  double m4_ = 0.0;
};

// Result of a Monte Carlo run.  squared_cv is +inf (with mean_is_zero set)
// when an indicator estimator saw no hits.
struct EstimatorReport {
  double mean = 0.0;
  double sample_variance = 0.0;
  double squared_cv = 0.0;
  bool mean_is_zero = false;
  double kurtosis = 0.0;
  double ci_halfwidth = 0.0;
  double confidence_level = 0.95;
  std::uint64_t paths = 0;
  WorkCounters work;
  double wall_seconds = 0.0;
  // Observable + configuration tag; merge refuses to pool mismatched runs.
  std::string context;

  // Full moment state so merged reports stay exact to fourth order.
  RunningMoments moments;
};

// Builds a report from accumulated moments.
EstimatorReport finalize_report(const RunningMoments& m, double confidence_level,
                                const WorkCounters& work, std::string context);

// Exact pooled statistics of two shards.  Throws config_error when the
// context tags differ; merging with an empty report is the identity.
EstimatorReport merge_reports(const EstimatorReport& a, const EstimatorReport& b);

// Step and sample-size planning for a target accuracy TOL split evenly
// between bias and statistical error.
struct TolerancePlan {
  double TOL = 0.0;
  double alpha = 0.05;
  double c_alpha = 0.0;    // (1 - alpha/2) Gaussian quantile
  double C_bias = 1.0;     // user-supplied weak-error constant
  double dt_star = 0.0;    // TOL / (2 C)
  std::uint64_t M_star = 0;  // ceil(C_alpha^2 * 4 Var / TOL^2)
};

TolerancePlan plan_tolerance(double TOL, double alpha, double C_bias,
                             double var_estimate);

// Standard normal quantile (Acklam's rational approximation, |rel err| < 1.2e-9).
double normal_quantile(double p);

// Bernoulli(p) moments used as analytic proxies for indicator estimators.
inline double bernoulli_squared_cv(double p) { return (1.0 - p) / p; }
inline double bernoulli_kurtosis(double p) {
  return (1.0 - 3.0 * p + 3.0 * p * p) / (p * (1.0 - p));
}

}  // namespace srn
