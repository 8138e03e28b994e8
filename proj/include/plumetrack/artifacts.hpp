#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "plumetrack/mission.hpp"

namespace plumetrack {

struct TrialRecord {
    int trial = 0;
    std::uint64_t seed = 0;
    TrackResult result;
    std::optional<double> wall_time_s;  // only reported when requested; breaks byte stability
};

struct RunMetrics {
    std::vector<TrialRecord> trials;
    int succeeded = 0;
    double success_rate = 0.0;
    std::optional<double> mean_error_m;  // over succeeded trials only
    double mean_sim_time_s = 0.0;
};

RunMetrics aggregate(std::vector<TrialRecord> trials);

void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryRow>& rows);
void write_uncertainty_csv(std::ostream& out, const std::vector<UncertaintyRow>& rows);
void write_planner_trace_csv(std::ostream& out, const std::vector<PlannerTraceRow>& rows);

// metrics.json body for a single mission (keys sorted, floats at 9 significant digits).
std::string single_metrics_json(const TrialRecord& record, const std::string& scenario_sha256);
std::string batch_metrics_json(const RunMetrics& metrics, std::uint64_t base_seed, const std::string& scenario_sha256);

// Writes trajectory.csv, uncertainty.csv, belief_final.csv, metrics.json and,
// when the log holds one, planner_trace.csv into `dir` (created if needed).
// Failures raise std::runtime_error naming the path.
void write_outputs(const TrialRecord& record, const MissionLog& log, const std::filesystem::path& dir,
                   const std::string& scenario_sha256);

void write_text_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace plumetrack
