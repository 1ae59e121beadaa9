#include "srn/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

namespace srn {

namespace {

using nlohmann::ordered_json;

// JSON forbids inf/nan; sentinels serialize as strings
ordered_json json_number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

std::string fmt17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_summary_csv(const ComparisonReport& report, std::ostream& os) {
  os << "dt,steps,policy,paths,mean,variance,squared_cv,kurtosis,ci_halfwidth,"
        "crude_proxy_squared_cv,crude_proxy_kurtosis,variance_reduction,"
        "kurtosis_flag,crude_mean,crude_variance,poisson_draws\n";
  for (const auto& row : report.rows) {
    const auto& is = row.is_report;
    os << fmt17(row.dt) << "," << row.steps << "," << report.policy << ","
       << is.paths << "," << fmt17(is.mean) << "," << fmt17(is.sample_variance)
       << "," << fmt17(is.squared_cv) << "," << fmt17(is.kurtosis) << ","
       << fmt17(is.ci_halfwidth) << "," << fmt17(row.crude_proxy_squared_cv)
       << "," << fmt17(row.crude_proxy_kurtosis) << ","
       << fmt17(row.variance_reduction) << "," << (row.kurtosis_flagged ? 1 : 0)
       << "," << fmt17(row.crude_report.mean) << ","
       << fmt17(row.crude_report.sample_variance) << ","
       << is.work.poisson_draws << "\n";
  }
}

void write_estimator_csv(const EstimatorReport& report, double dt,
                         std::ostream& os) {
  os << "dt,M,mean,variance,squared_cv,kurtosis,ci_halfwidth,wall_time,"
        "poisson_draws\n";
  os << fmt17(dt) << "," << report.paths << "," << fmt17(report.mean) << ","
     << fmt17(report.sample_variance) << "," << fmt17(report.squared_cv) << ","
     << fmt17(report.kurtosis) << "," << fmt17(report.ci_halfwidth) << ","
     << fmt17(report.wall_seconds) << "," << report.work.poisson_draws << "\n";
}

ordered_json estimator_to_json(const EstimatorReport& r) {
  ordered_json j;
  j["paths"] = r.paths;
  j["mean"] = json_number(r.mean);
  j["variance"] = json_number(r.sample_variance);
  j["squared_cv"] = json_number(r.squared_cv);
  j["mean_is_zero"] = r.mean_is_zero;
  j["kurtosis"] = json_number(r.kurtosis);
  j["ci_halfwidth"] = json_number(r.ci_halfwidth);
  j["confidence_level"] = r.confidence_level;
  j["wall_seconds"] = r.wall_seconds;
  j["context"] = r.context;
  j["work"] = {{"poisson_draws", r.work.poisson_draws},
               {"propensity_evals", r.work.propensity_evals},
               {"likelihood_updates", r.work.likelihood_updates}};
  return j;
}

ordered_json comparison_to_json(const ComparisonReport& report) {
  ordered_json j;
  j["system"] = report.system;
  j["policy"] = report.policy;
  j["seed"] = report.seed;
  j["model_hash"] = hex64(report.model_hash);
  j["grid_hash"] = hex64(report.grid_hash);
  j["s_max"] = report.s_max;
  j["rows"] = ordered_json::array();
  for (const auto& row : report.rows) {
    ordered_json r;
    r["dt"] = row.dt;
    r["steps"] = row.steps;
    r["is"] = estimator_to_json(row.is_report);
    if (row.crude_report.paths > 0)
      r["crude"] = estimator_to_json(row.crude_report);
    r["crude_proxy_squared_cv"] = json_number(row.crude_proxy_squared_cv);
    r["crude_proxy_kurtosis"] = json_number(row.crude_proxy_kurtosis);
    r["variance_reduction"] = json_number(row.variance_reduction);
    r["kurtosis_flag"] = row.kurtosis_flagged;
    j["rows"].push_back(std::move(r));
  }
  return j;
}

ordered_json distribution_to_json(const DistributionMatchReport& report) {
  ordered_json j;
  j["paths"] = report.paths;
  j["bin_lo"] = report.bin_lo;
  j["total_variation"] = report.total_variation;
  j["full_freq"] = report.full_freq;
  j["surrogate_freq"] = report.surrogate_freq;
  return j;
}

void write_run_directory(const PipelineResult& result, const ExperimentConfig& cfg,
                         const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);

  {
    std::ofstream os(dir + "/summary.csv", std::ios::binary);
    write_summary_csv(result.report, os);
  }
  {
    ordered_json j = comparison_to_json(result.report);
    j["config"] = cfg.echo;
    std::ofstream os(dir + "/summary.json", std::ios::binary);
    os << j.dump(2) << "\n";
  }
  {
    ordered_json prov;
    prov["version"] = kVersionString;
    prov["schema_version"] = cfg.schema_version;
    prov["config_hash"] = hex64(config_hash(cfg.echo));
    prov["seed"] = cfg.pipeline.seed;
    prov["threads"] = cfg.pipeline.threads;
    prov["model_hash"] = hex64(result.report.model_hash);
    prov["grid_hash"] = hex64(result.report.grid_hash);
    std::ofstream os(dir + "/provenance.json", std::ios::binary);
    os << prov.dump(2) << "\n";
  }
  {
    std::ofstream os(dir + "/manifest.json", std::ios::binary);
    os << cfg.echo.dump(2) << "\n";
  }
  {
    std::ofstream os(dir + "/seeds.txt", std::ios::binary);
    os << "seed " << cfg.pipeline.seed << "\n";
    os << "substream_domains forward=1 crude=2 fit=3 pilot=4 dist_full=5 "
          "dist_surrogate=6 validation=7\n";
  }
  if (result.model) {
    std::ofstream os(dir + "/model.txt", std::ios::binary);
    result.model->save(os);
  }
  if (result.grid) {
    std::ofstream os(dir + "/grid.txt", std::ios::binary);
    result.grid->save(os);
  }
  for (const auto& row : result.report.rows) {
    {
      std::ofstream os(dir + "/is_dt_" + std::to_string(row.steps) + ".csv",
                       std::ios::binary);
      write_estimator_csv(row.is_report, row.dt, os);
    }
    if (row.crude_report.paths > 0) {
      std::ofstream os(dir + "/crude_dt_" + std::to_string(row.steps) + ".csv",
                       std::ios::binary);
      write_estimator_csv(row.crude_report, row.dt, os);
    }
  }
}

}  // namespace srn
