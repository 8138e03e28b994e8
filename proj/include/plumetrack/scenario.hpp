#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "plumetrack/field.hpp"
#include "plumetrack/geometry.hpp"
#include "plumetrack/planner.hpp"

namespace plumetrack {

enum class MeasureMode {
    on_arrival,  // one reading per reached waypoint
    continuous,  // a reading every sample_period, en route included
};

// Everything needed to reproduce one tracking mission.
struct Scenario {
    std::string name;

    // workspace
    int nx = 100;
    int ny = 50;
    double cell_size = 5.0;
    Vec2 origin;

    // flow
    Vec2 velocity;
    double lambda = 4.9e-10;
    std::optional<double> effective_lambda;  // replaces lambda in the solver when set

    // source
    Vec2 source_position;
    double source_rate = 2.5;

    // usv
    Vec2 usv_start;
    double usv_speed = 2.0;

    // sonde
    std::optional<double> threshold;  // absolute; otherwise calibrated
    double threshold_fraction = 0.01;
    double noise_std = 0.0;
    double sample_period = 1.0;
    MeasureMode measure_mode = MeasureMode::on_arrival;

    // planner and kernels
    PlannerParams planner;
    int local_radius_cells = 5;

    // stopping
    double gamma = 0.99;
    double tau_m = 10.0;

    // sim
    double dt = 1.0;
    double warmup_s = 300.0;
    int max_updates = 2000;
    double max_sim_time_s = 3600.0;

    std::uint64_t seed = 0;

    GridGeometry geometry() const { return {nx, ny, cell_size, origin}; }
    FlowSpec flow() const { return {velocity, effective_lambda.value_or(lambda)}; }
    SourceSpec source() const { return {source_position, source_rate}; }

    // Throws ConfigError naming the first offending field.
    void validate() const;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

// Parses and validates scenario JSON. Unknown keys are rejected; absent
// optional keys take the defaults above. `origin_label` prefixes diagnostics.
Scenario parse_scenario_text(const std::string& text, const std::string& origin_label = "<scenario>");
Scenario parse_scenario(const std::filesystem::path& path);

// Canonical JSON (sorted keys, full precision); parse_scenario_text inverts it.
std::string serialize_scenario(const Scenario& scenario);

// A path as given if it exists, else a bundled scenario by name
// ("scenario_a" or "scenario_a.json").
std::filesystem::path resolve_scenario_path(const std::string& name_or_path);

std::filesystem::path bundled_scenario_dir();

}  // namespace plumetrack
