// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails.  Run all criteria (no arguments) or a subset by number,
// e.g. "acceptance 7 8".

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "srn/config.hpp"
#include "srn/report_io.hpp"
#include "srn/validation.hpp"

using namespace srn;

namespace {

struct Criterion {
  int number;
  std::string label;
  bool pass;
  std::string detail;
  double seconds;
};

std::vector<Criterion> results;

void record(int number, const std::string& label, bool pass,
            const std::string& detail, double seconds) {
  results.push_back({number, label, pass, detail, seconds});
  std::printf("[%s] %2d %-34s %s  (%.1fs)\n", pass ? "PASS" : "FAIL", number,
              label.c_str(), detail.c_str(), seconds);
  std::fflush(stdout);
}

class Timer {
 public:
  Timer() : t0_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

constexpr std::uint64_t kSeed = 2026;

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(5);
  ss << v;
  return ss.str();
}

// shared offline artifacts per system (fit per the experiment setup:
// M = 1e4 paths at dt = 2^-4, Lambda = {0,1,2}^2)
struct OfflineArtifacts {
  std::shared_ptr<const MPModel> model;
  std::shared_ptr<const ValueFunctionGrid> grid;
};

OfflineArtifacts offline_for(const NetworkPreset& preset) {
  PipelineConfig cfg(preset);
  cfg.fit_paths = 10000;
  cfg.fit_dt = 0.0625;
  cfg.forward_paths = 0;
  cfg.forward_dts = {};
  cfg.policy = "mp-mapped";
  cfg.seed = kSeed;
  const auto r = run_pipeline(cfg);
  return {r.model, r.grid};
}

ComparisonReport forward_runs(const NetworkPreset& preset,
                              const OfflineArtifacts& art,
                              const std::vector<double>& dts,
                              std::uint64_t paths, std::uint64_t seed) {
  PipelineConfig cfg(preset);
  cfg.forward_paths = paths;
  cfg.forward_dts = dts;
  cfg.policy = "mp-mapped";
  cfg.seed = seed;
  cfg.crude_baseline = false;
  return run_pipeline(cfg, art.model, art.grid).report;
}

void criterion_1() {
  Timer t;
  const auto ssa = check_ssa_binomial_tail(kSeed, 0);
  const auto bias = check_tl_bias_ordering(kSeed, 0);
  record(1, "analytic-oracle simulation", ssa.pass && bias.pass,
         ssa.detail + "; " + bias.detail, t.seconds());
}

void criterion_2() {
  Timer t;
  const auto r = check_likelihood_identity(kSeed);
  record(2, "likelihood identity (crude)", r.pass, r.detail, t.seconds());
}

void criterion_3() {
  Timer t;
  const auto r = check_unbiasedness(kSeed, 0);
  record(3, "IS unbiasedness (delta = 2a)", r.pass, r.detail, t.seconds());
}

void criterion_4() {
  Timer t;
  const auto r = check_orthonormality(kSeed, 0);
  record(4, "orthonormality identities", r.pass, r.detail, t.seconds());
}

void criterion_5() {
  Timer t;
  const auto r = check_dp_hjb_agreement(kSeed);
  record(5, "DP-HJB oracle equivalence", r.pass, r.detail, t.seconds());
}

void criterion_6(const OfflineArtifacts& mm_art, const OfflineArtifacts& g_art) {
  Timer t;
  const auto mm = michaelis_menten_preset();
  const auto gp = goutsias_preset();
  const TimeGrid grid{1.0, 16};
  const auto rep_mm = distribution_match_report(*mm_art.model, mm.net, mm.x0,
                                                grid, 10000, kSeed + 1);
  const auto rep_g = distribution_match_report(*g_art.model, gp.net, gp.x0, grid,
                                               10000, kSeed + 2);
  const bool pass = rep_mm.total_variation <= 0.05 && rep_g.total_variation <= 0.05;
  record(6, "MP distribution fidelity",
         pass,
         "TV(mm) = " + fmt(rep_mm.total_variation) +
             ", TV(goutsias) = " + fmt(rep_g.total_variation) + " (<= 0.05)",
         t.seconds());
}

void criteria_7_8_9(const OfflineArtifacts& mm_art, const OfflineArtifacts& g_art) {
  // Michaelis-Menten across the tested step sizes; dt = 2^-6 feeds 7 and 8
  Timer t_all;
  const auto mm = michaelis_menten_preset();
  const std::vector<double> dts = {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64,
                                   1.0 / 128};
  const auto mm_rep = forward_runs(mm, mm_art, dts, 100000, kSeed);
  const auto& mm_row = mm_rep.rows[3];  // dt = 2^-6

  const auto gp = goutsias_preset();
  const auto g_rep = forward_runs(gp, g_art, {1.0 / 64}, 100000, kSeed);
  const auto& g_row = g_rep.rows[0];
  const double t_base = t_all.seconds();

  // 7: magnitudes
  {
    const bool mm_ok = mm_row.is_report.mean >= 1e-6 && mm_row.is_report.mean <= 1e-4;
    const bool g_ok = g_row.is_report.mean >= 1e-4 && g_row.is_report.mean <= 1e-2;
    record(7, "rare-event magnitude", mm_ok && g_ok,
           "mm mean = " + fmt(mm_row.is_report.mean) +
               " in [1e-6,1e-4]; goutsias mean = " + fmt(g_row.is_report.mean) +
               " in [1e-4,1e-2]",
           t_base);
  }

  // 8: variance reduction vs the analytic crude proxy
  {
    const bool mm_ok = mm_row.variance_reduction >= 1e2;
    const bool g_ok = g_row.variance_reduction >= 50.0;
    record(8, "variance reduction", mm_ok && g_ok,
           "mm factor = " + fmt(mm_row.variance_reduction) +
               " (>= 1e2); goutsias factor = " + fmt(g_row.variance_reduction) +
               " (>= 50)",
           0.0);
  }

  // 9: kurtosis sanity
  {
    Timer t9;
    bool mm_ok = true;
    double mm_worst_ratio = 0.0;
    for (const auto& row : mm_rep.rows) {
      const double k = row.is_report.kurtosis;
      if (!std::isfinite(k) || k >= row.crude_proxy_kurtosis) mm_ok = false;
      mm_worst_ratio = std::max(mm_worst_ratio, k / row.crude_proxy_kurtosis);
    }

    // Goutsias: kurtosis decreasing from dt = 2^-3 to 2^-7, mean over 3 seeds
    double coarse_mean = 0.0, fine_mean = 0.0;
    for (std::uint64_t s = 0; s < 3; ++s) {
      const auto rep = forward_runs(gp, g_art, {1.0 / 8, 1.0 / 128}, 100000,
                                    kSeed + 10 + s);
      coarse_mean += rep.rows[0].is_report.kurtosis / 3.0;
      fine_mean += rep.rows[1].is_report.kurtosis / 3.0;
    }
    const bool g_ok = coarse_mean > fine_mean;
    record(9, "kurtosis sanity", mm_ok && g_ok,
           "mm max kurt/proxy = " + fmt(mm_worst_ratio) +
               " (< 1); goutsias kurt " + fmt(coarse_mean) + " (2^-3) -> " +
               fmt(fine_mean) + " (2^-7)",
           t9.seconds());
  }
}

void criterion_10() {
  Timer t;
  auto run_with_threads = [&](unsigned threads) {
    PipelineConfig cfg(michaelis_menten_preset());
    cfg.fit_paths = 2000;
    cfg.forward_paths = 20000;
    cfg.forward_dts = {1.0 / 16, 1.0 / 32};
    cfg.policy = "mp-mapped";
    cfg.seed = kSeed;
    cfg.threads = threads;
    const auto result = run_pipeline(cfg);
    std::ostringstream csv;
    write_summary_csv(result.report, csv);
    return csv.str();
  };
  const std::string csv1 = run_with_threads(1);
  const std::string csv8 = run_with_threads(8);
  record(10, "reproducibility (1 vs 8 threads)", csv1 == csv8,
         csv1 == csv8 ? "summary CSV bytes identical" : "summary CSV bytes differ",
         t.seconds());
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
  auto selected = [&](int n) { return wanted.empty() || wanted.count(n); };

  std::printf("acceptance suite (seed %llu)\n",
              static_cast<unsigned long long>(kSeed));

  try {
    if (selected(1)) criterion_1();
    if (selected(2)) criterion_2();
    if (selected(3)) criterion_3();
    if (selected(4)) criterion_4();
    if (selected(5)) criterion_5();

    if (selected(6) || selected(7) || selected(8) || selected(9)) {
      Timer t_offline;
      const auto mm_art = offline_for(michaelis_menten_preset());
      const auto g_art = offline_for(goutsias_preset());
      std::printf("       offline stage (both systems): %.1fs\n",
                  t_offline.seconds());
      if (selected(6)) criterion_6(mm_art, g_art);
      if (selected(7) || selected(8) || selected(9))
        criteria_7_8_9(mm_art, g_art);
    }

    if (selected(10)) criterion_10();
  } catch (const std::exception& e) {
    std::printf("[FAIL] suite aborted: %s\n", e.what());
    return 1;
  }

  int failed = 0;
  for (const auto& r : results) failed += r.pass ? 0 : 1;
  std::printf("%zu criteria run, %d failed\n", results.size(), failed);
  return failed == 0 ? 0 : 1;
}
