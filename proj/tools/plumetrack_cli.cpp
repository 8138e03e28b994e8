// Command-line front end: run, batch, validate and field subcommands.
//
// Exit codes: 0 success, 1 mission aborted (or any batch trial aborted),
// 2 usage or configuration error.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "plumetrack/artifacts.hpp"
#include "plumetrack/errors.hpp"
#include "plumetrack/format.hpp"
#include "plumetrack/mission.hpp"
#include "plumetrack/scenario.hpp"

namespace fs = std::filesystem;
using namespace plumetrack;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAborted = 1;
constexpr int kExitUsage = 2;

struct Loaded {
    Scenario scenario;
    std::string sha256;
};

Loaded load(const std::string& name_or_path) {
    Scenario s = parse_scenario(resolve_scenario_path(name_or_path));
    std::string sha = sha256_hex(serialize_scenario(s));
    return {std::move(s), std::move(sha)};
}

struct TrialOutput {
    TrialRecord record;
    MissionLog log;
};

TrialOutput run_trial(const MissionGoal& goal, const PreparedWorld& world, int trial, std::uint64_t seed,
                      bool trace, bool wall_time) {
    TrialOutput out;
    out.record.trial = trial;
    out.record.seed = seed;
    out.log.record_planner_trace = trace;
    Rng rng(seed);
    const auto start = std::chrono::steady_clock::now();
    out.record.result = run_mission(goal, world, rng, FeedbackSink{}, nullptr, &out.log);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    if (wall_time) out.record.wall_time_s = elapsed.count();
    return out;
}

void print_summary(const TrialRecord& rec, std::ostream& os) {
    const TrackResult& r = rec.result;
    os << "trial " << rec.trial << " seed " << rec.seed << ": " << to_string(r.status) << ", estimate ("
       << format_real(r.estimate.x) << ", " << format_real(r.estimate.y) << ") m, error "
       << format_real(r.error_m.value_or(0.0)) << " m, sci (" << format_real(r.sci.x_m) << ", "
       << format_real(r.sci.y_m) << ") m, " << r.updates << " updates, " << format_real(r.sim_time_s)
       << " s simulated\n";
}

int cmd_run(const std::string& scenario_arg, std::optional<std::uint64_t> seed_arg, const fs::path& out_dir,
            bool trace, bool wall_time) {
    const Loaded loaded = load(scenario_arg);
    const std::uint64_t seed = seed_arg.value_or(loaded.scenario.seed);
    const MissionGoal goal = MissionGoal::from_scenario(loaded.scenario);
    const PreparedWorld world = prepare_world(loaded.scenario);

    const auto start = std::chrono::steady_clock::now();
    TrialOutput out = run_trial(goal, world, 0, seed, trace, wall_time);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

    write_outputs(out.record, out.log, out_dir, loaded.sha256);
    for (const auto& e : out.log.events) std::cerr << "event: " << e << '\n';
    print_summary(out.record, std::cout);
    std::cout << "wall time " << format_real(elapsed.count()) << " s; artifacts in " << out_dir.string() << '\n';
    return out.record.result.status == MissionStatus::succeeded ? kExitOk : kExitAborted;
}

int cmd_batch(const std::string& scenario_arg, int trials, std::optional<std::uint64_t> seed_arg,
              const fs::path& out_dir, unsigned jobs, bool trace, bool wall_time) {
    if (trials < 1) throw ConfigError("--trials", "must be >= 1");
    const Loaded loaded = load(scenario_arg);
    const std::uint64_t base = seed_arg.value_or(loaded.scenario.seed);
    const MissionGoal goal = MissionGoal::from_scenario(loaded.scenario);
    const PreparedWorld world = prepare_world(loaded.scenario);

    std::vector<TrialOutput> outputs(static_cast<std::size_t>(trials));
    jobs = std::max(1u, jobs);
    for (int first = 0; first < trials; first += static_cast<int>(jobs)) {
        std::vector<std::future<TrialOutput>> pending;
        const int last = std::min(trials, first + static_cast<int>(jobs));
        for (int t = first; t < last; ++t) {
            pending.push_back(std::async(std::launch::async, run_trial, std::cref(goal), std::cref(world), t,
                                         base + static_cast<std::uint64_t>(t), trace, wall_time));
        }
        for (int t = first; t < last; ++t) outputs[static_cast<std::size_t>(t)] = pending[t - first].get();
    }

    std::vector<TrialRecord> records;
    for (auto& out : outputs) {
        std::ostringstream sub;
        sub << "trial_" << out.record.trial;
        write_outputs(out.record, out.log, out_dir / sub.str(), loaded.sha256);
        print_summary(out.record, std::cout);
        records.push_back(out.record);
    }
    const RunMetrics metrics = aggregate(std::move(records));
    write_text_file(out_dir / "metrics.json", batch_metrics_json(metrics, base, loaded.sha256));
    std::cout << "success rate " << format_real(100.0 * metrics.success_rate) << " %, mean error "
              << (metrics.mean_error_m ? format_real(*metrics.mean_error_m) : std::string("n/a")) << " m\n";
    return metrics.succeeded == trials ? kExitOk : kExitAborted;
}

int cmd_validate(const std::string& scenario_arg) {
    const Loaded loaded = load(scenario_arg);
    std::cout << "ok: " << (loaded.scenario.name.empty() ? scenario_arg : loaded.scenario.name) << " sha256 "
              << loaded.sha256 << '\n';
    return kExitOk;
}

int cmd_field(const std::string& scenario_arg, double t, const std::string& out_path) {
    if (!(t >= 0.0)) throw ConfigError("--t", "must be >= 0");
    const Scenario s = load(scenario_arg).scenario;
    const ScalarField field = run_warmup(init_field(s.geometry(), 0.0), s.flow(), s.source(), t, s.dt);
    std::ostringstream body;
    write_field_csv(body, field);
    if (out_path.empty() || out_path == "-") {
        std::cout << body.str();
    } else {
        write_text_file(out_path, body.str());
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Active source tracking of a dispersing plume with a survey vehicle"};
    app.require_subcommand(1);

    std::string scenario;
    std::optional<std::uint64_t> seed;
    std::string out_dir = "out";
    bool trace = false;
    bool wall_time = false;
    int trials = 3;
    unsigned jobs = 1;
    double t = 0.0;
    std::string field_out;

    auto* run = app.add_subcommand("run", "run one mission and write its artifacts");
    run->add_option("--scenario", scenario, "scenario file or bundled name")->required();
    run->add_option("--seed", seed, "generator seed (default: the scenario's)");
    run->add_option("--out", out_dir, "output directory");
    run->add_flag("--trace", trace, "also write planner_trace.csv");
    run->add_flag("--wall-time", wall_time, "record wall_time_s in metrics.json");

    auto* batch = app.add_subcommand("batch", "run seeded trials and aggregate metrics");
    batch->add_option("--scenario", scenario, "scenario file or bundled name")->required();
    batch->add_option("--trials", trials, "number of trials")->required();
    batch->add_option("--seed", seed, "first seed; trial k uses seed + k");
    batch->add_option("--out", out_dir, "output directory");
    batch->add_option("--jobs", jobs, "trials run concurrently");
    batch->add_flag("--trace", trace, "also write planner traces");
    batch->add_flag("--wall-time", wall_time, "record wall_time_s per trial");

    auto* validate = app.add_subcommand("validate", "parse and validate a scenario");
    validate->add_option("--scenario", scenario, "scenario file or bundled name")->required();

    auto* field = app.add_subcommand("field", "export the plume after warming up for --t seconds");
    field->add_option("--scenario", scenario, "scenario file or bundled name")->required();
    field->add_option("--t", t, "simulated time, s")->required();
    field->add_option("--out", field_out, "CSV path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*run) return cmd_run(scenario, seed, out_dir, trace, wall_time);
        if (*batch) return cmd_batch(scenario, trials, seed, out_dir, jobs, trace, wall_time);
        if (*validate) return cmd_validate(scenario);
        if (*field) return cmd_field(scenario, t, field_out);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
