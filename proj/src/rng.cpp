#include "srn/rng.hpp"

#include <stdexcept>

namespace srn {

namespace {

std::int64_t poisson_inversion(RngStream& rng, double mean) {
  // Devroye's inversion by sequential search: walk the CDF until the
  // uniform is covered.  Expected iterations = mean + 1.
  const double u = rng.uniform();
  double p = std::exp(-mean);
  double cdf = p;
  std::int64_t k = 0;
  while (u > cdf && k < 1000) {
    ++k;
    p *= mean / static_cast<double>(k);
    cdf += p;
  }
  return k;
}

std::int64_t poisson_ptrs(RngStream& rng, double mean) {
  // Transformed rejection with squeeze (Hormann, PTRS).  Valid for
  // mean >= 10.
  const double log_mean = std::log(mean);
  const double b = 0.931 + 2.53 * std::sqrt(mean);
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);

  for (;;) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform();
    const double us = 0.5 - std::fabs(u);
    const double kd = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<std::int64_t>(kd);
    if (kd < 0.0 || (us < 0.013 && v > us)) continue;
    const double k = kd;
    if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
        -mean + k * log_mean - std::lgamma(k + 1.0)) {
      return static_cast<std::int64_t>(kd);
    }
  }
}

}  // namespace

std::int64_t RngStream::poisson(double mean) {
  if (mean <= 0.0) {
    if (mean < 0.0) throw std::invalid_argument("poisson: negative mean");
    return 0;
  }
  if (mean < 10.0) return poisson_inversion(*this, mean);
  return poisson_ptrs(*this, mean);
}

}  // namespace srn
