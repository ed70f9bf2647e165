#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "reeblab/correspondence.hpp"
#include "reeblab/flow.hpp"

namespace reeblab {

using json = nlohmann::json;

std::string format_g17(double x);

json loop_to_json(const DiscreteLoop& v);
DiscreteLoop loop_from_json(const json& j);

json validation_report_to_json(const ValidationReport& rep);
json critical_report_to_json(const CriticalReport& rep);
json lemma2_report_to_json(const Lemma2Report& rep);

json flow_config_to_json(const FlowConfig& cfg);
FlowConfig flow_config_from_json(const json& j);

/// One record per recorded slice:
/// {"s":, "action":, "grad_norm":, "tau": real-or-null, "loop": {...}}
void write_trajectory_jsonl(const std::filesystem::path& path, const Trajectory& traj);

/// Per-step scalar series, header "s,action,grad_norm,tau", 17 significant
/// digits, empty tau field for non-Rabinowitz flows.
void write_series_csv(const std::filesystem::path& path, const Trajectory& traj);

/// Sidecar with the flow configuration and provenance (seed, rng identifier).
void write_trajectory_meta(const std::filesystem::path& path, const Trajectory& traj,
                           const json& extra);

/// Read a trajectory written by write_trajectory_jsonl; the flow configuration
/// is restored from the sidecar "<stem>.meta.json" next to the file.
Trajectory read_trajectory(const std::filesystem::path& jsonl_path);

void write_series_csv(const std::filesystem::path& path, const ScalarSeries& series,
                      const std::string& value_name);

}  // namespace reeblab
