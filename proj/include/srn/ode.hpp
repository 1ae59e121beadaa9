#pragma once

#include <functional>
#include <vector>

namespace srn {

struct OdeOptions {
  double rel_tol = 1e-6;
  double abs_tol = 1e-9;
  double max_step = 0.0;  // 0: no cap
};

// Adaptive embedded Runge-Kutta pair (Dormand-Prince 5(4)) with standard
// PI-free step control.  Integrates y' = f(t, y) from t0 to t1; t1 < t0
// integrates backward.  post_step may modify y after each accepted step
// (used for positivity floors); on_accept observes every accepted (t, y)
// including the initial condition.  Throws numeric_error on step-size
// collapse.
void integrate_rk45(
    const std::function<void(double, const std::vector<double>&,
                             std::vector<double>&)>& f,
    std::vector<double>& y, double t0, double t1, const OdeOptions& opts,
    const std::function<void(std::vector<double>&)>& post_step,
    const std::function<void(double, const std::vector<double>&)>& on_accept);

}  // namespace srn
