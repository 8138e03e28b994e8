#include "plumetrack/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "plumetrack/errors.hpp"

namespace plumetrack {

using nlohmann::json;

namespace {

// Reads keys from one JSON object, remembering which were consumed so that
// leftovers can be reported as unknown.
class Section {
public:
    Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
        if (!node_.is_object()) throw ConfigError(path_, "expected an object");
    }

    bool has(const std::string& key) const { return node_.contains(key); }

    const json& raw(const std::string& key) {
        seen_.insert(key);
        return node_.at(key);
    }

    Section child(const std::string& key) {
        if (!has(key)) throw ConfigError(field(key), "missing required section");
        return Section(raw(key), field(key));
    }

    std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    double number(const std::string& key) {
        if (!has(key)) throw ConfigError(field(key), "missing required key");
        const json& v = raw(key);
        if (!v.is_number()) throw ConfigError(field(key), "expected a number");
        return v.get<double>();
    }
    double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

    std::optional<double> optional_number(const std::string& key) {
        if (!has(key) || raw(key).is_null()) return std::nullopt;
        return number(key);
    }

    long long integer(const std::string& key) {
        if (!has(key)) throw ConfigError(field(key), "missing required key");
        const json& v = raw(key);
        if (!v.is_number_integer()) throw ConfigError(field(key), "expected an integer");
        return v.get<long long>();
    }
    long long integer(const std::string& key, long long fallback) { return has(key) ? integer(key) : fallback; }

    Vec2 vec2(const std::string& key) {
        if (!has(key)) throw ConfigError(field(key), "missing required key");
        const json& v = raw(key);
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
            throw ConfigError(field(key), "expected a two-element numeric array");
        return {v[0].get<double>(), v[1].get<double>()};
    }
    Vec2 vec2(const std::string& key, Vec2 fallback) { return has(key) ? vec2(key) : fallback; }

    std::string string(const std::string& key, const std::string& fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_string()) throw ConfigError(field(key), "expected a string");
        return v.get<std::string>();
    }

    void reject_unknown() const {
        for (const auto& item : node_.items()) {
            if (!seen_.count(item.key())) throw ConfigError(field(item.key()), "unknown key");
        }
    }

private:
    const json& node_;
    std::string path_;
    std::set<std::string> seen_;
};

void require(bool ok, const char* field, const std::string& what) {
    if (!ok) throw ConfigError(field, what);
}

bool finite(Vec2 v) { return std::isfinite(v.x) && std::isfinite(v.y); }

}  // namespace

void Scenario::validate() const {
    require(nx >= 1, "workspace.nx", "must be >= 1");
    require(ny >= 1, "workspace.ny", "must be >= 1");
    require(cell_size > 0.0 && std::isfinite(cell_size), "workspace.h", "must be positive");
    require(finite(origin), "workspace.origin", "must be finite");
    const GridGeometry g = geometry();

    require(finite(velocity), "flow.v", "must be finite");
    require(norm(velocity) > 0.0, "flow.v", "must be non-zero (the kernels need a wave direction)");
    require(lambda >= 0.0 && std::isfinite(lambda), "flow.lambda", "must be >= 0");
    if (effective_lambda)
        require(*effective_lambda >= 0.0 && std::isfinite(*effective_lambda), "flow.effective_lambda", "must be >= 0");

    require(finite(source_position) && g.contains(source_position), "source.position", "lies outside the workspace");
    require(source_rate >= 0.0 && std::isfinite(source_rate), "source.rate", "must be >= 0");

    require(finite(usv_start) && g.contains(usv_start), "usv.start", "lies outside the workspace");
    require(usv_speed > 0.0 && std::isfinite(usv_speed), "usv.speed", "must be positive");

    if (threshold) require(*threshold > 0.0 && std::isfinite(*threshold), "sonde.threshold", "must be positive");
    require(threshold_fraction > 0.0 && threshold_fraction <= 1.0, "sonde.threshold_fraction", "must lie in (0, 1]");
    require(noise_std >= 0.0 && std::isfinite(noise_std), "sonde.noise_std", "must be >= 0");
    require(sample_period > 0.0 && std::isfinite(sample_period), "sonde.sample_period", "must be positive");

    try {
        planner.validate();
    } catch (const ValidationError& e) {
        throw ConfigError("planner", e.what());
    }
    require(local_radius_cells >= 0, "planner.local_radius_cells", "must be >= 0");

    require(gamma > 0.0 && gamma < 1.0, "stopping.gamma", "must lie in (0, 1)");
    require(tau_m > 0.0 && std::isfinite(tau_m), "stopping.tau_m", "must be positive");

    require(dt > 0.0 && std::isfinite(dt), "sim.dt", "must be positive");
    require(dt <= max_stable_dt(flow(), g, 1.0), "sim.dt", "exceeds the explicit-scheme stability bound");
    require(warmup_s >= 0.0 && std::isfinite(warmup_s), "sim.warmup_s", "must be >= 0");
    require(max_updates > 0, "sim.max_updates", "must be positive");
    require(max_sim_time_s > 0.0 && std::isfinite(max_sim_time_s), "sim.max_sim_time_s", "must be positive");
}

Scenario parse_scenario_text(const std::string& text, const std::string& origin_label) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("", origin_label + ": " + e.what());
    }

    Scenario s;
    try {
        Section root(doc, "");
        s.name = root.string("name", "");

        Section ws = root.child("workspace");
        const long long nx = ws.integer("nx");
        const long long ny = ws.integer("ny");
        require(nx >= 1 && nx <= 100000, "workspace.nx", "must lie in [1, 100000]");
        require(ny >= 1 && ny <= 100000, "workspace.ny", "must lie in [1, 100000]");
        s.nx = static_cast<int>(nx);
        s.ny = static_cast<int>(ny);
        s.cell_size = ws.number("h");
        s.origin = ws.vec2("origin", {});
        ws.reject_unknown();

        Section flow = root.child("flow");
        s.velocity = flow.vec2("v");
        s.lambda = flow.number("lambda", s.lambda);
        s.effective_lambda = flow.optional_number("effective_lambda");
        flow.reject_unknown();

        Section src = root.child("source");
        s.source_position = src.vec2("position");
        s.source_rate = src.number("rate", s.source_rate);
        src.reject_unknown();

        Section usv = root.child("usv");
        s.usv_start = usv.vec2("start");
        s.usv_speed = usv.number("speed", s.usv_speed);
        usv.reject_unknown();

        if (root.has("sonde")) {
            Section sonde = root.child("sonde");
            s.threshold = sonde.optional_number("threshold");
            s.threshold_fraction = sonde.number("threshold_fraction", s.threshold_fraction);
            s.noise_std = sonde.number("noise_std", s.noise_std);
            s.sample_period = sonde.number("sample_period", s.sample_period);
            const std::string mode = sonde.string("measure_mode", "on_arrival");
            if (mode == "on_arrival") {
                s.measure_mode = MeasureMode::on_arrival;
            } else if (mode == "continuous") {
                s.measure_mode = MeasureMode::continuous;
            } else {
                throw ConfigError("sonde.measure_mode", "expected \"on_arrival\" or \"continuous\"");
            }
            sonde.reject_unknown();
        }

        if (root.has("planner")) {
            Section pl = root.child("planner");
            const long long window = pl.integer("window_cells", s.planner.window_cells);
            require(window >= 3 && window <= 10001, "planner.window_cells", "must lie in [3, 10001]");
            s.planner.window_cells = static_cast<int>(window);
            s.planner.sigma2_hit = pl.number("sigma2_hit", s.planner.sigma2_hit);
            s.planner.sigma2_miss = pl.number("sigma2_miss", s.planner.sigma2_miss);
            s.planner.detection_ceiling = pl.number("detection_ceiling", s.planner.detection_ceiling);
            s.planner.prob_clip = pl.number("prob_clip", s.planner.prob_clip);
            const long long radius = pl.integer("local_radius_cells", s.local_radius_cells);
            require(radius >= 0 && radius <= 100000, "planner.local_radius_cells", "must lie in [0, 100000]");
            s.local_radius_cells = static_cast<int>(radius);
            pl.reject_unknown();
        }

        if (root.has("stopping")) {
            Section st = root.child("stopping");
            s.gamma = st.number("gamma", s.gamma);
            s.tau_m = st.number("tau_m", s.tau_m);
            st.reject_unknown();
        }

        if (root.has("sim")) {
            Section sim = root.child("sim");
            s.dt = sim.number("dt", s.dt);
            s.warmup_s = sim.number("warmup_s", s.warmup_s);
            const long long updates = sim.integer("max_updates", s.max_updates);
            require(updates >= 0 && updates <= 100000000, "sim.max_updates", "must lie in [0, 1e8]");
            s.max_updates = static_cast<int>(updates);
            s.max_sim_time_s = sim.number("max_sim_time_s", s.max_sim_time_s);
            sim.reject_unknown();
        }

        if (root.has("seed")) {
            const json& seed = root.raw("seed");
            if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0))
                throw ConfigError("seed", "expected a non-negative integer");
            s.seed = seed.get<std::uint64_t>();
        }
        root.reject_unknown();
    } catch (const ConfigError& e) {
        throw ConfigError(e.field(), origin_label + ": " + e.what());
    }

    try {
        s.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(e.field(), origin_label + ": " + e.what());
    }
    return s;
}

Scenario parse_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("", "cannot open scenario file " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_scenario_text(text.str(), path.string());
}

std::string serialize_scenario(const Scenario& s) {
    auto pair = [](Vec2 v) { return json::array({v.x, v.y}); };
    auto optional = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
    json doc;
    doc["name"] = s.name;
    doc["workspace"] = {{"nx", s.nx}, {"ny", s.ny}, {"h", s.cell_size}, {"origin", pair(s.origin)}};
    doc["flow"] = {{"v", pair(s.velocity)}, {"lambda", s.lambda}, {"effective_lambda", optional(s.effective_lambda)}};
    doc["source"] = {{"position", pair(s.source_position)}, {"rate", s.source_rate}};
    doc["usv"] = {{"start", pair(s.usv_start)}, {"speed", s.usv_speed}};
    doc["sonde"] = {{"threshold", optional(s.threshold)},
                    {"threshold_fraction", s.threshold_fraction},
                    {"noise_std", s.noise_std},
                    {"sample_period", s.sample_period},
                    {"measure_mode", s.measure_mode == MeasureMode::on_arrival ? "on_arrival" : "continuous"}};
    doc["planner"] = {{"window_cells", s.planner.window_cells},
                      {"sigma2_hit", s.planner.sigma2_hit},
                      {"sigma2_miss", s.planner.sigma2_miss},
                      {"detection_ceiling", s.planner.detection_ceiling},
                      {"prob_clip", s.planner.prob_clip},
                      {"local_radius_cells", s.local_radius_cells}};
    doc["stopping"] = {{"gamma", s.gamma}, {"tau_m", s.tau_m}};
    doc["sim"] = {{"dt", s.dt},
                  {"warmup_s", s.warmup_s},
                  {"max_updates", s.max_updates},
                  {"max_sim_time_s", s.max_sim_time_s}};
    doc["seed"] = s.seed;
    return doc.dump(2) + "\n";
}

std::filesystem::path bundled_scenario_dir() { return PLUMETRACK_SCENARIO_DIR; }

std::filesystem::path resolve_scenario_path(const std::string& name_or_path) {
    const std::filesystem::path direct(name_or_path);
    if (std::filesystem::exists(direct)) return direct;
    std::filesystem::path bundled = bundled_scenario_dir() / name_or_path;
    if (bundled.extension() != ".json") bundled += ".json";
    if (std::filesystem::exists(bundled)) return bundled;
    return direct;
}

}  // namespace plumetrack
