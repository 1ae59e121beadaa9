#pragma once

#include <string>

#include <json.hpp>

#include "srn/pipeline.hpp"

namespace srn {

// One structured-text document drives every stage; unknown keys are
// rejected so typos fail loudly instead of silently using defaults.
struct ExperimentConfig {
  explicit ExperimentConfig(PipelineConfig p) : pipeline(std::move(p)) {}

  PipelineConfig pipeline;
  std::string output_dir;
  int schema_version = 1;
  nlohmann::ordered_json echo;  // the validated document
};

ExperimentConfig parse_experiment_config(const nlohmann::ordered_json& doc);
ExperimentConfig load_experiment_config(const std::string& path);

// FNV-1a over the canonical dump; part of the provenance block.
std::uint64_t config_hash(const nlohmann::ordered_json& doc);

inline constexpr const char* kVersionString = "srn 1.0.0";

}  // namespace srn
