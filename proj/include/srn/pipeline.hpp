#pragma once

#include <map>
#include <memory>

#include "srn/mp_model.hpp"

namespace srn {

// One end-to-end experiment: offline stage (TL ensemble -> Gram-Schmidt ->
// L2 regression -> reduced HJB -> policy), then IS forward runs per step
// size compared against crude tau-leap.
struct PipelineConfig {
  explicit PipelineConfig(NetworkPreset sys) : system(std::move(sys)) {}

  NetworkPreset system;

  // regression stage
  int fit_paths = 10000;
  double fit_dt = 0.0625;
  int basis_t_degree = 2;
  int basis_s_degree = 2;

  // HJB stage; s_max 0 selects max(threshold, pilot max) * 2
  std::int64_t s_max = 0;
  double u_floor = 1e-30;
  double ode_rel_tol = 1e-6;
  double ode_abs_tol = 1e-9;
  double ode_max_step = 0.0;
  double sigmoid_slope = 4.0;
  double sigmoid_midpoint = 0.0;  // 0 selects threshold + 0.5
  int pilot_paths = 1000;

  // forward stage
  std::uint64_t forward_paths = 100000;
  std::vector<double> forward_dts = {0.015625};
  std::string policy = "mp-mapped";  // crude | mp-mapped | mp-alternative | hjb-full
  double delta_floor = 1e-12;
  bool crude_baseline = true;

  std::uint64_t seed = 1;
  unsigned threads = 0;
};

struct ComparisonRow {
  double dt = 0.0;
  int steps = 0;
  EstimatorReport is_report;
  EstimatorReport crude_report;  // zero paths when the baseline is disabled
  // analytic crude-indicator proxies at p = IS mean
  double crude_proxy_squared_cv = 0.0;
  double crude_proxy_kurtosis = 0.0;
  double variance_reduction = 0.0;  // proxy squared-CV / IS squared-CV
  bool kurtosis_flagged = false;    // set by kurtosis_guard
};

struct ComparisonReport {
  std::string system;
  std::string policy;
  std::uint64_t seed = 0;
  std::uint64_t model_hash = 0;
  std::uint64_t grid_hash = 0;
  std::int64_t s_max = 0;
  std::vector<ComparisonRow> rows;
};

struct PipelineResult {
  std::shared_ptr<const MPModel> model;          // null for crude / hjb-full
  std::shared_ptr<const ValueFunctionGrid> grid; // null for crude
  ComparisonReport report;
};

// Runs the workflow; the offline artifacts can be supplied to skip the
// offline stage (identical seeds then reproduce identical estimates).
PipelineResult run_pipeline(const PipelineConfig& cfg,
                            std::shared_ptr<const MPModel> reuse_model = nullptr,
                            std::shared_ptr<const ValueFunctionGrid> reuse_grid = nullptr);

// Builds the policy for a solved grid/model combination.
ControlPolicy make_policy(const PipelineConfig& cfg,
                          std::shared_ptr<const MPModel> model,
                          std::shared_ptr<const ValueFunctionGrid> grid);

// Final-time histogram comparison between the projected full process and
// the surrogate (unit-width integer bins over the union support).
struct DistributionMatchReport {
  std::int64_t bin_lo = 0;  // first bin value
  std::vector<double> full_freq;
  std::vector<double> surrogate_freq;
  double total_variation = 0.0;
  std::uint64_t paths = 0;
};

DistributionMatchReport distribution_match_report(const MPModel& model,
                                                  const ReactionNetwork& net,
                                                  const State& x0,
                                                  const TimeGrid& grid,
                                                  std::uint64_t paths,
                                                  std::uint64_t seed,
                                                  unsigned threads = 0);

// Flags step sizes whose IS kurtosis exceeds the analytic crude-indicator
// kurtosis proxy (variance estimator robustness check).  Returns the number
// of flagged rows and mutates rows[i].kurtosis_flagged.
int kurtosis_guard(ComparisonReport& report);

}  // namespace srn
