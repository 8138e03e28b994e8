#include "plumetrack/artifacts.hpp"

#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "plumetrack/format.hpp"

namespace plumetrack {

using nlohmann::json;

namespace {

json real(double v) { return json(round_significant(v)); }
json real(const std::optional<double>& v) { return v ? real(*v) : json(nullptr); }
json pair(Vec2 v) { return json::array({real(v.x), real(v.y)}); }

json trial_json(const TrialRecord& rec) {
    const TrackResult& r = rec.result;
    return {{"status", to_string(r.status)},
            {"estimate_m", pair(r.estimate)},
            {"error_m", real(r.error_m)},
            {"sci_m", json::array({real(r.sci.x_m), real(r.sci.y_m)})},
            {"updates", r.updates},
            {"sim_time_s", real(r.sim_time_s)},
            {"wall_time_s", real(rec.wall_time_s)},
            {"seed", rec.seed}};
}

}  // namespace

RunMetrics aggregate(std::vector<TrialRecord> trials) {
    RunMetrics m;
    m.trials = std::move(trials);
    double error_sum = 0.0;
    double time_sum = 0.0;
    for (const auto& t : m.trials) {
        time_sum += t.result.sim_time_s;
        if (t.result.status == MissionStatus::succeeded) {
            ++m.succeeded;
            error_sum += t.result.error_m.value_or(0.0);
        }
    }
    if (!m.trials.empty()) {
        m.success_rate = static_cast<double>(m.succeeded) / static_cast<double>(m.trials.size());
        m.mean_sim_time_s = time_sum / static_cast<double>(m.trials.size());
    }
    if (m.succeeded > 0) m.mean_error_m = error_sum / m.succeeded;
    return m;
}

void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryRow>& rows) {
    out << "time_s,x_m,y_m,concentration,z,waypoint_x_m,waypoint_y_m\n";
    for (const auto& r : rows) {
        out << format_real(r.reading.time) << ',' << format_real(r.reading.position.x) << ','
            << format_real(r.reading.position.y) << ',' << format_real(r.reading.concentration) << ','
            << (r.reading.detected ? 1 : 0) << ',' << format_real(r.waypoint.x) << ',' << format_real(r.waypoint.y)
            << '\n';
    }
}

void write_uncertainty_csv(std::ostream& out, const std::vector<UncertaintyRow>& rows) {
    out << "step,time_s,width_x_m,width_y_m,est_x_m,est_y_m\n";
    for (const auto& r : rows) {
        out << r.step << ',' << format_real(r.time_s) << ',' << format_real(r.sci.x_m) << ','
            << format_real(r.sci.y_m) << ',' << format_real(r.estimate.x) << ',' << format_real(r.estimate.y)
            << '\n';
    }
}

void write_planner_trace_csv(std::ostream& out, const std::vector<PlannerTraceRow>& rows) {
    out << "step,cand_i,cand_j,p_hit,ig,selected\n";
    for (const auto& r : rows) {
        out << r.step << ',' << r.score.cell.i << ',' << r.score.cell.j << ',' << format_real(r.score.p_hit) << ','
            << format_real(r.score.ig) << ',' << (r.selected ? 1 : 0) << '\n';
    }
}

std::string single_metrics_json(const TrialRecord& record, const std::string& scenario_sha256) {
    json doc = trial_json(record);
    doc["scenario_sha256"] = scenario_sha256;
    return doc.dump(2) + "\n";
}

std::string batch_metrics_json(const RunMetrics& m, std::uint64_t base_seed, const std::string& scenario_sha256) {
    json trials = json::array();
    for (const auto& t : m.trials) {
        json entry = trial_json(t);
        entry["trial"] = t.trial;
        trials.push_back(std::move(entry));
    }
    json doc;
    doc["scenario_sha256"] = scenario_sha256;
    doc["seed"] = base_seed;
    doc["trials"] = std::move(trials);
    doc["aggregate"] = {{"total", m.trials.size()},
                        {"succeeded", m.succeeded},
                        {"success_rate", real(m.success_rate)},
                        {"mean_error_m", real(m.mean_error_m)},
                        {"mean_sim_time_s", real(m.mean_sim_time_s)}};
    return doc.dump(2) + "\n";
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

void write_outputs(const TrialRecord& record, const MissionLog& log, const std::filesystem::path& dir,
                   const std::string& scenario_sha256) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());

    auto emit = [&](const char* name, auto&& writer) {
        std::ostringstream body;
        writer(body);
        write_text_file(dir / name, body.str());
    };
    emit("trajectory.csv", [&](std::ostream& o) { write_trajectory_csv(o, log.trajectory); });
    emit("uncertainty.csv", [&](std::ostream& o) { write_uncertainty_csv(o, log.uncertainty); });
    if (log.final_belief) emit("belief_final.csv", [&](std::ostream& o) { write_belief_csv(o, *log.final_belief); });
    if (log.record_planner_trace)
        emit("planner_trace.csv", [&](std::ostream& o) { write_planner_trace_csv(o, log.planner_trace); });
    write_text_file(dir / "metrics.json", single_metrics_json(record, scenario_sha256));
}

}  // namespace plumetrack
