#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>

#include "srn/monte_carlo.hpp"
#include "srn/observable.hpp"

namespace srn {

// Per-reaction sampling rates delta(t, x).  Admissibility: delta_j = 0
// exactly when a_j(x) = 0, otherwise delta_j > 0.  Policies are read-only
// after construction and shared across concurrent paths.
class ControlPolicy {
 public:
  using Evaluator = std::function<void(double t, const State& x,
                                       std::span<const double> a,
                                       std::span<double> delta)>;

  ControlPolicy() = default;
  ControlPolicy(std::string descriptor, Evaluator eval)
      : descriptor_(std::move(descriptor)), eval_(std::move(eval)) {}

  // delta = a: the measure is unchanged and every weight is exactly 1.
  static ControlPolicy crude();

  // delta = factor * a; a deliberately suboptimal admissible tilt used in
  // unbiasedness checks.
  static ControlPolicy scaled_crude(double factor);

  void evaluate(double t, const State& x, std::span<const double> a,
                std::span<double> delta) const {
    eval_(t, x, a, delta);
  }

  const std::string& descriptor() const { return descriptor_; }

 private:
  std::string descriptor_ = "crude";
  Evaluator eval_;
};

// Final state with its path likelihood ratio.
struct WeightedSample {
  State final_state;
  double likelihood = 1.0;
  double log_likelihood = 0.0;
};

// Running log-likelihood; one exponentiation at path end keeps 2^16-step
// products of factors in [1e-3, 1e3] away from overflow.
class LikelihoodAccumulator {
 public:
  void add_log(double log_step) { log_sum_ += log_step; }
  double log_value() const { return log_sum_; }
  double value() const { return std::exp(log_sum_); }

 private:
  double log_sum_ = 0.0;
};

// log of the stepwise ratio
//   L_n = exp(-sum_j (a_j - delta_j) dt) * prod_j (a_j / delta_j)^{p_j},
// with a_j/delta_j = 1 when a_j = delta_j = 0.  Throws inadmissible_control
// if a_j and delta_j disagree about being zero.
double log_likelihood_step(std::span<const double> a,
                           std::span<const double> delta,
                           std::span<const std::int64_t> p, double dt);

inline double likelihood_step(std::span<const double> a,
                              std::span<const double> delta,
                              std::span<const std::int64_t> p, double dt) {
  return std::exp(log_likelihood_step(a, delta, p, dt));
}

// Tau-leap path under the modified rates delta(t_n, x) dt; controls are
// evaluated at the left endpoint of each step.  Returns the final state
// and the accumulated likelihood ratio.
WeightedSample is_tau_leap_path(const ReactionNetwork& net, const State& x0,
                                const TimeGrid& grid, const ControlPolicy& policy,
                                RngStream& rng, WorkCounters* work = nullptr);

// IS Monte Carlo estimator over samples y_m = L_m g(X_N).
EstimatorReport is_mc_estimate(const ReactionNetwork& net, const State& x0,
                               const TimeGrid& grid, const ControlPolicy& policy,
                               const Observable& g, std::uint64_t paths,
                               std::uint64_t seed,
                               StreamDomain domain = StreamDomain::kForward,
                               std::uint64_t variant = 0, unsigned threads = 0);

}  // namespace srn
