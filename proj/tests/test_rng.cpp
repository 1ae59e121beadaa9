#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "srn/rng.hpp"

using srn::RngStream;

TEST_CASE("identical seed and substream reproduce the stream bitwise") {
  RngStream a(42, 7);
  RngStream b(42, 7);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());

  RngStream c(42, 7);
  RngStream d(42, 8);
  int diff = 0;
  for (int i = 0; i < 64; ++i) diff += (c.next_u64() != d.next_u64());
  CHECK(diff > 60);  // neighbouring substreams are unrelated
}

TEST_CASE("uniform lies in [0,1) and uniform_pos in (0,1]") {
  RngStream rng(1, 0);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double v = rng.uniform_pos();
    CHECK(v > 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("poisson moments match both sampling regimes") {
  // means straddle the inversion/PTRS switch at 10
  for (double mean : {0.3, 2.5, 9.9, 10.1, 47.0, 400.0}) {
    RngStream rng(123, static_cast<std::uint64_t>(mean * 10));
    const int n = 200000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double k = static_cast<double>(rng.poisson(mean));
      sum += k;
      sum2 += k * k;
    }
    const double m = sum / n;
    const double var = sum2 / n - m * m;
    const double se_mean = std::sqrt(mean / n);
    CHECK(std::fabs(m - mean) < 4.0 * se_mean);
    CHECK(std::fabs(var - mean) < 0.02 * mean + 6.0 * se_mean * std::sqrt(mean));
  }
}

TEST_CASE("poisson tail probabilities match the analytic law") {
  // P(X <= k) for X ~ Poisson(4) at a few fixed k, 3-sigma tolerance
  RngStream rng(7, 1);
  const double mean = 4.0;
  const int n = 100000;
  std::vector<int> counts(30, 0);
  for (int i = 0; i < n; ++i) {
    const auto k = rng.poisson(mean);
    if (k < 30) counts[static_cast<std::size_t>(k)]++;
  }
  double pk = std::exp(-mean);
  double cdf_true = 0.0;
  double cdf_emp = 0.0;
  for (int k = 0; k <= 8; ++k) {
    cdf_true += pk;
    cdf_emp += static_cast<double>(counts[static_cast<std::size_t>(k)]) / n;
    const double se = std::sqrt(cdf_true * (1 - cdf_true) / n);
    CHECK(std::fabs(cdf_emp - cdf_true) < 3.5 * se + 1e-12);
    pk *= mean / (k + 1);
  }
}

TEST_CASE("poisson CDF in the rejection regime") {
  // mean 12 exercises the transformed-rejection branch
  RngStream rng(8, 2);
  const double mean = 12.0;
  const int n = 200000;
  std::vector<int> counts(64, 0);
  for (int i = 0; i < n; ++i) {
    const auto k = rng.poisson(mean);
    if (k < 64) counts[static_cast<std::size_t>(k)]++;
  }
  double pk = std::exp(-mean), cdf_true = 0.0, cdf_emp = 0.0;
  for (int k = 0; k <= 20; ++k) {
    cdf_true += pk;
    cdf_emp += static_cast<double>(counts[static_cast<std::size_t>(k)]) / n;
    if (k == 8 || k == 12 || k == 16 || k == 20) {
      const double se = std::sqrt(cdf_true * (1 - cdf_true) / n);
      CHECK(std::fabs(cdf_emp - cdf_true) < 3.5 * se);
    }
    pk *= mean / (k + 1);
  }
}

TEST_CASE("poisson of zero mean returns zero") {
  RngStream rng(9, 9);
  for (int i = 0; i < 100; ++i) CHECK(rng.poisson(0.0) == 0);
}
