#include "srn/ode.hpp"

#include <algorithm>
#include <cmath>

#include "srn/errors.hpp"

namespace srn {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
// b - b_hat for the embedded error estimate
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

void integrate_rk45(
    const std::function<void(double, const std::vector<double>&,
                             std::vector<double>&)>& f,
    std::vector<double>& y, double t0, double t1, const OdeOptions& opts,
    const std::function<void(std::vector<double>&)>& post_step,
    const std::function<void(double, const std::vector<double>&)>& on_accept) {
  const std::size_t n = y.size();
  const double span = t1 - t0;
  if (span == 0.0) {
    if (on_accept) on_accept(t0, y);
    return;
  }
  const double dir = span > 0.0 ? 1.0 : -1.0;

  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
  std::vector<double> ytmp(n), ynew(n);

  double h = span / 100.0;
  if (opts.max_step > 0.0) h = dir * std::min(std::fabs(h), opts.max_step);

  double t = t0;
  if (on_accept) on_accept(t, y);

  // stop once the remaining interval is below resolution; a sub-resolution
  // closing step would trip the collapse guard
  while (dir * (t1 - t) > 1e-13 * std::fabs(span)) {
    if (dir * (t + h - t1) > 0.0) h = t1 - t;
    if (std::fabs(h) < 1e-14 * std::fabs(span))
      throw numeric_error(
          "rk45: step size collapsed; consider a larger positivity floor or "
          "looser tolerances");

    f(t, y, k1);
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
    f(t + c2 * h, ytmp, k2);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    f(t + c3 * h, ytmp, k3);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    f(t + c4 * h, ytmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    f(t + c5 * h, ytmp, k5);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                            a64 * k4[i] + a65 * k5[i]);
    f(t + h, ytmp, k6);
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                            b6 * k6[i]);
    f(t + h, ynew, k7);

    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                            e6 * k6[i] + e7 * k7[i]);
      const double scale =
          opts.abs_tol +
          opts.rel_tol * std::max(std::fabs(y[i]), std::fabs(ynew[i]));
      err += (e / scale) * (e / scale);
    }
    err = std::sqrt(err / static_cast<double>(n));

    if (err <= 1.0) {
      t += h;
      y = ynew;
      if (post_step) post_step(y);
      if (on_accept) on_accept(t, y);
    }

    const double factor =
        std::clamp(0.9 * std::pow(std::max(err, 1e-16), -0.2), 0.2, 5.0);
    h *= factor;
    if (opts.max_step > 0.0 && std::fabs(h) > opts.max_step) h = dir * opts.max_step;
  }
}

}  // namespace srn
