#include "srn/statistics.hpp"

#include <cmath>

namespace srn {

void RunningMoments::merge(const RunningMoments& b) {
  if (b.n_ == 0) return;
  if (n_ == 0) {
    *this = b;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(b.n_);
  const double n = na + nb;
  const double delta = b.mean_ - mean_;
  const double d2 = delta * delta;

  const double m2 = m2_ + b.m2_ + d2 * na * nb / n;
  const double m3 = m3_ + b.m3_ + d2 * delta * na * nb * (na - nb) / (n * n) +
                    3.0 * delta * (na * b.m2_ - nb * m2_) / n;
  const double m4 = m4_ + b.m4_ +
                    d2 * d2 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n) +
                    6.0 * d2 * (na * na * b.m2_ + nb * nb * m2_) / (n * n) +
                    4.0 * delta * (na * b.m3_ - nb * m3_) / n;

  mean_ += delta * nb / n;
  m2_ = m2;
  m3_ = m3;
  m4_ = m4;
  n_ += b.n_;
}

EstimatorReport finalize_report(const RunningMoments& m, double confidence_level,
                                const WorkCounters& work, std::string context) {
  EstimatorReport r;
  r.moments = m;
  r.paths = m.count();
  r.mean = m.mean();
  r.sample_variance = m.sample_variance();
  if (r.mean == 0.0) {
    r.mean_is_zero = true;
    r.squared_cv = std::numeric_limits<double>::infinity();
  } else {
    r.squared_cv = r.sample_variance / (r.mean * r.mean);
  }
  r.kurtosis = m.kurtosis();
  r.confidence_level = confidence_level;
  const double c_alpha = normal_quantile(0.5 + confidence_level / 2.0);
  r.ci_halfwidth =
      r.paths > 0
          ? c_alpha * std::sqrt(r.sample_variance / static_cast<double>(r.paths))
          : 0.0;
  r.work = work;
  r.context = std::move(context);
  return r;
}

EstimatorReport merge_reports(const EstimatorReport& a, const EstimatorReport& b) {
  if (a.paths == 0) return b;
  if (b.paths == 0) return a;
  if (a.context != b.context)
    throw config_error("merge_reports: context mismatch ('" + a.context +
                       "' vs '" + b.context + "')");
  RunningMoments m = a.moments;
  m.merge(b.moments);
  WorkCounters w = a.work;
  w += b.work;
  EstimatorReport r = finalize_report(m, a.confidence_level, w, a.context);
  r.wall_seconds = a.wall_seconds + b.wall_seconds;
  return r;
}

TolerancePlan plan_tolerance(double TOL, double alpha, double C_bias,
                             double var_estimate) {
  if (TOL <= 0.0 || C_bias <= 0.0 || var_estimate < 0.0 || alpha <= 0.0 ||
      alpha >= 1.0)
    throw config_error("plan_tolerance: invalid inputs");
  TolerancePlan p;
  p.TOL = TOL;
  p.alpha = alpha;
  p.C_bias = C_bias;
  p.c_alpha = normal_quantile(1.0 - alpha / 2.0);
  p.dt_star = TOL / (2.0 * C_bias);
  p.M_star = static_cast<std::uint64_t>(
      std::ceil(p.c_alpha * p.c_alpha * 4.0 * var_estimate / (TOL * TOL)));
  return p;
}

double normal_quantile(double p) {
  if (p <= 0.0 || p >= 1.0)
    throw config_error("normal_quantile: p must lie in (0,1)");

  // Acklam's piecewise rational approximation.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;

  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - plow) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace srn
