#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "srn/monte_carlo.hpp"
#include "srn/rng.hpp"
#include "srn/statistics.hpp"

using namespace srn;

namespace {

EstimatorReport report_of(const std::vector<double>& ys, std::string ctx = "t") {
  RunningMoments m;
  for (double y : ys) m.push(y);
  return finalize_report(m, 0.95, WorkCounters{}, std::move(ctx));
}

// independent single-pass oracle for the centered power sums
struct BruteMoments {
  double mean = 0, m2 = 0, m3 = 0, m4 = 0;
  explicit BruteMoments(const std::vector<double>& ys) {
    const double n = static_cast<double>(ys.size());
    for (double y : ys) mean += y;
    mean /= n;
    for (double y : ys) {
      const double d = y - mean;
      m2 += d * d;
      m3 += d * d * d;
      m4 += d * d * d * d;
    }
  }
};

}  // namespace

TEST_CASE("constant samples: mean 1, variance 0, squared_cv 0") {
  const auto r = report_of({1, 1, 1, 1, 1});
  CHECK(r.mean == 1.0);
  CHECK(r.sample_variance == 0.0);
  CHECK(r.squared_cv == 0.0);
  CHECK(std::isnan(r.kurtosis));  // constant samples have no kurtosis
}

TEST_CASE("zero mean reports the infinite squared_cv sentinel") {
  const auto r = report_of({0, 0, 0});
  CHECK(r.mean_is_zero);
  CHECK(std::isinf(r.squared_cv));
}

TEST_CASE("Bernoulli squared_cv approaches (1-p)/p") {
  RngStream rng(21, 0);
  std::vector<double> ys;
  const int M = 100000;
  ys.reserve(M);
  for (int i = 0; i < M; ++i) ys.push_back(rng.uniform() < 0.5 ? 1.0 : 0.0);
  const auto r = report_of(ys);
  CHECK(r.squared_cv == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("Bernoulli(0.5) kurtosis approaches 1") {
  RngStream rng(22, 0);
  std::vector<double> ys;
  const int M = 100000;
  ys.reserve(M);
  for (int i = 0; i < M; ++i) ys.push_back(rng.uniform() < 0.5 ? 1.0 : 0.0);
  const auto r = report_of(ys);
  // (1 - 3p + 3p^2)/(p(1-p)) = 1 at p = 0.5
  CHECK(bernoulli_kurtosis(0.5) == doctest::Approx(1.0));
  CHECK(r.kurtosis == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("indicator squared_cv matches 1/mean - 1 up to sampling noise") {
  for (double p : {0.1, 0.35, 0.8}) {
    RngStream rng(23, static_cast<std::uint64_t>(p * 100));
    RunningMoments m;
    const int M = 200000;
    for (int i = 0; i < M; ++i) m.push(rng.uniform() < p ? 1.0 : 0.0);
    const auto r = finalize_report(m, 0.95, {}, "t");
    CHECK(r.squared_cv ==
          doctest::Approx(1.0 / r.mean - 1.0).epsilon(0.02).scale(1.0));
  }
}

TEST_CASE("tolerance planning") {
  SUBCASE("alpha = 0.05 gives the 1.96 quantile") {
    const auto p = plan_tolerance(0.1, 0.05, 1.0, 1.0);
    CHECK(p.c_alpha == doctest::Approx(1.96).epsilon(5e-4));
  }
  SUBCASE("dt_star = TOL/(2C)") {
    const auto p = plan_tolerance(0.1, 0.05, 1.0, 1.0);
    CHECK(p.dt_star == doctest::Approx(0.05));
  }
  SUBCASE("M_star formula") {
    // ceil(1.96^2 * 4 * 1e-2 / 1e-4) = 1537
    const auto p = plan_tolerance(0.01, 0.05, 1.0, 1e-2);
    CHECK(p.M_star == 1537);
    // and the literal inputs var = 1e-5 give ceil(1.5366) = 2
    const auto q = plan_tolerance(0.01, 0.05, 1.0, 1e-5);
    CHECK(q.M_star == 2);
  }
  SUBCASE("invalid inputs are rejected") {
    CHECK_THROWS_AS(plan_tolerance(0.0, 0.05, 1.0, 1.0), config_error);
    CHECK_THROWS_AS(plan_tolerance(0.1, 0.05, 0.0, 1.0), config_error);
  }
}

TEST_CASE("merge with an empty report is the identity") {
  const auto r = report_of({1, 0, 1, 1});
  const EstimatorReport empty;
  const auto m1 = merge_reports(r, empty);
  const auto m2 = merge_reports(empty, r);
  CHECK(m1.mean == r.mean);
  CHECK(m1.sample_variance == r.sample_variance);
  CHECK(m2.kurtosis == r.kurtosis);
  CHECK(m2.paths == r.paths);
}

TEST_CASE("merge of singleton reports {1} and {0} has mean 0.5") {
  const auto a = report_of({1.0});
  const auto b = report_of({0.0});
  const auto m = merge_reports(a, b);
  CHECK(m.mean == doctest::Approx(0.5));
  CHECK(m.paths == 2);
}

TEST_CASE("merge refuses mismatched contexts") {
  const auto a = report_of({1.0, 2.0}, "obs-A");
  const auto b = report_of({3.0, 4.0}, "obs-B");
  CHECK_THROWS_AS(merge_reports(a, b), config_error);
}

TEST_CASE("pooled fourth moment equals single-pass recomputation") {
  RngStream rng(31, 0);
  std::vector<double> ys;
  for (int i = 0; i < 100; ++i) ys.push_back(rng.uniform() * 10.0 - 3.0);

  RunningMoments left, right;
  for (int i = 0; i < 37; ++i) left.push(ys[static_cast<std::size_t>(i)]);
  for (int i = 37; i < 100; ++i) right.push(ys[static_cast<std::size_t>(i)]);
  RunningMoments pooled = left;
  pooled.merge(right);

  const BruteMoments brute(ys);
  CHECK(pooled.mean() == doctest::Approx(brute.mean).epsilon(1e-12));
  CHECK(pooled.m2() == doctest::Approx(brute.m2).epsilon(1e-10));
  CHECK(pooled.m3() == doctest::Approx(brute.m3).epsilon(1e-9));
  CHECK(pooled.m4() == doctest::Approx(brute.m4).epsilon(1e-9));
}

TEST_CASE("moment merging is associative to 1e-12 relative") {
  RngStream rng(32, 0);
  auto make = [&](int n) {
    RunningMoments m;
    for (int i = 0; i < n; ++i) m.push(rng.uniform() * 4.0 + 0.5);
    return m;
  };
  const auto a = make(11), b = make(23), c = make(47);

  RunningMoments ab = a;
  ab.merge(b);
  RunningMoments ab_c = ab;
  ab_c.merge(c);

  RunningMoments bc = b;
  bc.merge(c);
  RunningMoments a_bc = a;
  a_bc.merge(bc);

  CHECK(ab_c.mean() == doctest::Approx(a_bc.mean()).epsilon(1e-12));
  CHECK(ab_c.m2() == doctest::Approx(a_bc.m2()).epsilon(1e-12));
  CHECK(ab_c.m3() == doctest::Approx(a_bc.m3()).epsilon(1e-11));
  CHECK(ab_c.m4() == doctest::Approx(a_bc.m4()).epsilon(1e-11));
}

TEST_CASE("95% confidence interval covers a known Bernoulli mean") {
  const double p = 0.3;
  int covered = 0;
  const int reps = 200, M = 1000;
  for (int r = 0; r < reps; ++r) {
    RngStream rng(500 + static_cast<std::uint64_t>(r), 0);
    RunningMoments m;
    for (int i = 0; i < M; ++i) m.push(rng.uniform() < p ? 1.0 : 0.0);
    const auto rep = finalize_report(m, 0.95, {}, "cov");
    if (std::fabs(rep.mean - p) <= rep.ci_halfwidth) ++covered;
  }
  CHECK(covered >= 180);  // >= 90% of 200 repetitions
}

TEST_CASE("mc_estimate is independent of the thread count") {
  auto sample = [](std::uint64_t m) {
    RngStream rng(64, substream_id(StreamDomain::kValidation, 0, m));
    McSample s;
    s.value = rng.uniform();
    s.work.poisson_draws = 1;
    return s;
  };
  const auto r1 = mc_estimate(10000, sample, 0.95, "ctx", 1);
  const auto r8 = mc_estimate(10000, sample, 0.95, "ctx", 8);
  CHECK(r1.mean == r8.mean);
  CHECK(r1.sample_variance == r8.sample_variance);
  CHECK(r1.kurtosis == r8.kurtosis);
  CHECK(r1.work.poisson_draws == r8.work.poisson_draws);
}
