#include <doctest.h>

#include <json.hpp>
#include <sstream>

#include "plumetrack/artifacts.hpp"
#include "plumetrack/format.hpp"
#include "process.hpp"

using namespace plumetrack;
using nlohmann::json;
namespace fs = std::filesystem;

TEST_CASE("run writes every artifact") {
    const fs::path dir = proc::scratch("run_a");
    REQUIRE(proc::run_cli("run --scenario scenario_a --seed 7 --out '" + (dir / "out").string() + "'", dir) == 0);
    for (const char* f : {"trajectory.csv", "uncertainty.csv", "belief_final.csv", "metrics.json"})
        CHECK(fs::exists(dir / "out" / f));
    CHECK_FALSE(fs::exists(dir / "out" / "planner_trace.csv"));

    const json m = json::parse(proc::slurp(dir / "out" / "metrics.json"));
    CHECK(m["status"] == "succeeded");
    CHECK(m["error_m"].get<double>() <= 10.0);
    CHECK(m["seed"] == 7);
    CHECK(m["wall_time_s"].is_null());
    CHECK(m["estimate_m"].size() == 2);
    CHECK(m["sci_m"].size() == 2);
    CHECK(m["updates"].get<int>() > 0);
    CHECK(m["scenario_sha256"].get<std::string>().size() == 64);

    const std::string traj = proc::slurp(dir / "out" / "trajectory.csv");
    CHECK(traj.rfind("time_s,x_m,y_m,concentration,z,waypoint_x_m,waypoint_y_m\n", 0) == 0);
    CHECK(traj.find('\r') == std::string::npos);
    const std::string unc = proc::slurp(dir / "out" / "uncertainty.csv");
    CHECK(unc.rfind("step,time_s,width_x_m,width_y_m,est_x_m,est_y_m\n", 0) == 0);
    const std::string bel = proc::slurp(dir / "out" / "belief_final.csv");
    CHECK(bel.rfind("i,j,x_m,y_m,probability\n", 0) == 0);
}

TEST_CASE("planner trace on request") {
    const fs::path dir = proc::scratch("trace");
    REQUIRE(proc::run_cli("run --scenario scenario_a --trace --wall-time --out '" + (dir / "out").string() + "'", dir) == 0);
    const std::string trace = proc::slurp(dir / "out" / "planner_trace.csv");
    CHECK(trace.rfind("step,cand_i,cand_j,p_hit,ig,selected\n", 0) == 0);
    const json m = json::parse(proc::slurp(dir / "out" / "metrics.json"));
    CHECK(m["wall_time_s"].is_number());
}

TEST_CASE("metrics are byte stable for a fixed seed") {
    const fs::path a = proc::scratch("stable_a"), b = proc::scratch("stable_b");
    REQUIRE(proc::run_cli("run --scenario scenario_b --seed 11 --out '" + (a / "out").string() + "'", a) == 0);
    REQUIRE(proc::run_cli("run --scenario scenario_b --seed 11 --out '" + (b / "out").string() + "'", b) == 0);
    for (const char* f : {"metrics.json", "trajectory.csv", "uncertainty.csv", "belief_final.csv"})
        CHECK(sha256_hex(proc::slurp(a / "out" / f)) == sha256_hex(proc::slurp(b / "out" / f)));
}

TEST_CASE("aborted run exits 1 and still reports an estimate") {
    const fs::path dir = proc::scratch("upwind");
    fs::path cfg = dir / "short.json";
    Scenario s = parse_scenario(resolve_scenario_path("scenario_a_upwind_start"));
    s.max_sim_time_s = 200.0;
    write_text_file(cfg, serialize_scenario(s));
    CHECK(proc::run_cli("run --scenario '" + cfg.string() + "' --out '" + (dir / "out").string() + "'", dir) == 1);
    const json m = json::parse(proc::slurp(dir / "out" / "metrics.json"));
    CHECK(m["status"] == "aborted");
    CHECK(m["estimate_m"][0].is_number());
    CHECK(m["error_m"].is_number());
}

TEST_CASE("validate and usage errors exit 2") {
    const fs::path dir = proc::scratch("validate");
    CHECK(proc::run_cli("validate --scenario scenario_a", dir) == 0);

    write_text_file(dir / "broken.json", "{ \"workspace\": {\"nx\": 10,, }");
    CHECK(proc::run_cli("validate --scenario '" + (dir / "broken.json").string() + "'", dir) == 2);
    CHECK_FALSE(proc::slurp(dir / "stderr.txt").empty());

    write_text_file(dir / "outside.json", R"({"workspace": {"nx": 10, "ny": 10, "h": 1.0},
 "flow": {"v": [1.0, 0.0]}, "source": {"position": [50.0, 0.0]}, "usv": {"start": [0.0, 0.0]}})");
    CHECK(proc::run_cli("validate --scenario '" + (dir / "outside.json").string() + "'", dir) == 2);
    CHECK(proc::slurp(dir / "stderr.txt").find("source.position") != std::string::npos);

    CHECK(proc::run_cli("run", dir) == 2);
    CHECK(proc::run_cli("frobnicate", dir) == 2);
    CHECK(proc::run_cli("batch --scenario scenario_a --trials 0", dir) == 2);
}

TEST_CASE("field export") {
    const fs::path dir = proc::scratch("field");
    REQUIRE(proc::run_cli("field --scenario scenario_a --t 30", dir) == 0);
    const std::string csv = proc::slurp(dir / "stdout.txt");
    CHECK(csv.rfind("i,j,x_m,y_m,concentration\n", 0) == 0);
    std::size_t lines = 0;
    for (char c : csv) lines += c == '\n';
    CHECK(lines == 5001);
    REQUIRE(proc::run_cli("field --scenario scenario_a --t 30 --out '" + (dir / "f.csv").string() + "'", dir) == 0);
    CHECK(proc::slurp(dir / "f.csv") == csv);
}

TEST_CASE("batch of three trials aggregates by hand") {
    const fs::path dir = proc::scratch("batch");
    REQUIRE(proc::run_cli("batch --scenario scenario_a --trials 3 --seed 5 --jobs 2 --out '" + (dir / "out").string() + "'", dir) == 0);
    const json m = json::parse(proc::slurp(dir / "out" / "metrics.json"));
    REQUIRE(m["trials"].size() == 3);
    int succeeded = 0;
    double err = 0.0, sim = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
        const json& t = m["trials"][k];
        CHECK(t["seed"] == 5 + k);
        CHECK(fs::exists(dir / "out" / ("trial_" + std::to_string(k)) / "metrics.json"));
        sim += t["sim_time_s"].get<double>();
        if (t["status"] == "succeeded") {
            ++succeeded;
            err += t["error_m"].get<double>();
        }
    }
    const json& agg = m["aggregate"];
    CHECK(agg["total"] == 3);
    CHECK(agg["succeeded"] == succeeded);
    CHECK(agg["success_rate"].get<double>() == doctest::Approx(succeeded / 3.0).epsilon(1e-8));
    CHECK(agg["mean_sim_time_s"].get<double>() == doctest::Approx(sim / 3.0).epsilon(1e-8));
    if (succeeded) CHECK(agg["mean_error_m"].get<double>() == doctest::Approx(err / succeeded).epsilon(1e-8));
}

TEST_CASE("aggregate formulas") {
    auto rec = [](int k, MissionStatus st, double err, double sim) {
        TrialRecord r;
        r.trial = k;
        r.seed = 100 + k;
        r.result.status = st;
        r.result.error_m = err;
        r.result.sim_time_s = sim;
        return r;
    };
    const RunMetrics m = aggregate({rec(0, MissionStatus::succeeded, 2.0, 100.0),
                                    rec(1, MissionStatus::aborted, 50.0, 3600.0),
                                    rec(2, MissionStatus::succeeded, 4.0, 200.0)});
    CHECK(m.succeeded == 2);
    CHECK(m.success_rate == doctest::Approx(2.0 / 3.0));
    CHECK(*m.mean_error_m == doctest::Approx(3.0));
    CHECK(m.mean_sim_time_s == doctest::Approx(3900.0 / 3.0));

    const RunMetrics none = aggregate({rec(0, MissionStatus::aborted, 9.0, 10.0)});
    CHECK_FALSE(none.mean_error_m.has_value());
    CHECK(none.success_rate == 0.0);
    const json j = json::parse(batch_metrics_json(none, 0, std::string(64, '0')));
    CHECK(j["aggregate"]["mean_error_m"].is_null());
}

TEST_CASE("artifact CSV writers") {
    std::vector<UncertaintyRow> rows{{1, 2.5, {495.0, 250.0}, {0.0, 1.0 / 3.0}}};
    std::ostringstream out;
    write_uncertainty_csv(out, rows);
    CHECK(out.str() == "step,time_s,width_x_m,width_y_m,est_x_m,est_y_m\n1,2.5,495,250,0,0.333333333\n");

    std::vector<PlannerTraceRow> trace{{3, {{4, 5}, 0.125, 0.5}, true}, {3, {{5, 5}, 0.0625, 0.25}, false}};
    std::ostringstream t;
    write_planner_trace_csv(t, trace);
    CHECK(t.str() == "step,cand_i,cand_j,p_hit,ig,selected\n3,4,5,0.5,0.125,1\n3,5,5,0.25,0.0625,0\n");

    SondeReading r;
    r.time = 1.0;
    r.position = {2.0, -3.0};
    r.concentration = 0.5;
    r.detected = true;
    std::ostringstream tr;
    write_trajectory_csv(tr, {{r, {7.5, 2.5}}});
    CHECK(tr.str() == "time_s,x_m,y_m,concentration,z,waypoint_x_m,waypoint_y_m\n1,2,-3,0.5,1,7.5,2.5\n");
}
