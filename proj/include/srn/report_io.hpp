#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "srn/config.hpp"
#include "srn/pipeline.hpp"

namespace srn {

// Round-trip-exact decimal rendering; all tabular output goes through this
// so identical runs produce identical bytes.
std::string fmt17(double v);

// Pipeline summary table, one row per step size.  Deterministic content
// only (no wall times): the reproducibility contract compares these bytes.
void write_summary_csv(const ComparisonReport& report, std::ostream& os);

// Per-estimator detail row (crude or IS) with timing.
void write_estimator_csv(const EstimatorReport& report, double dt,
                         std::ostream& os);

nlohmann::ordered_json estimator_to_json(const EstimatorReport& report);
nlohmann::ordered_json comparison_to_json(const ComparisonReport& report);
nlohmann::ordered_json distribution_to_json(const DistributionMatchReport& report);

// Run directory layout: config echo + provenance, serialized model/grid,
// summary.csv / summary.json, per-dt estimator CSVs, seed record.
void write_run_directory(const PipelineResult& result, const ExperimentConfig& cfg,
                         const std::string& dir);

}  // namespace srn
