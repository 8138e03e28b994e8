#pragma once

#include <atomic>
#include <condition_variable>
#include <cstddef>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "plumetrack/belief.hpp"
#include "plumetrack/field.hpp"
#include "plumetrack/planner.hpp"
#include "plumetrack/scenario.hpp"
#include "plumetrack/uncertainty.hpp"
#include "plumetrack/vehicle.hpp"

namespace plumetrack {

struct MissionGoal {
    std::shared_ptr<const Scenario> scenario;
    double gamma = 0.99;
    double tau_m = 10.0;
    int max_updates = 2000;  // 0 aborts before the first reading
    double max_sim_time_s = 3600.0;

    static MissionGoal from_scenario(Scenario scenario);
    void validate() const;
};

enum class MissionStatus { succeeded, aborted, canceled };

const char* to_string(MissionStatus status);

struct MissionFeedback {
    int step = 0;  // 1-based belief-update count
    double sim_time_s = 0.0;
    Vec2 estimate;
    SciWidths sci;
    Vec2 usv_position;
    bool last_z = false;
};

struct TrackResult {
    MissionStatus status = MissionStatus::aborted;
    Vec2 estimate;
    SciWidths sci;
    std::optional<double> error_m;
    int updates = 0;
    double sim_time_s = 0.0;
    int degenerate_updates = 0;  // readings whose likelihood annihilated the prior

    friend bool operator==(const TrackResult& a, const TrackResult& b) {
        return a.status == b.status && a.estimate == b.estimate && a.sci.x_m == b.sci.x_m &&
               a.sci.y_m == b.sci.y_m && a.error_m == b.error_m && a.updates == b.updates &&
               a.sim_time_s == b.sim_time_s && a.degenerate_updates == b.degenerate_updates;
    }
};

struct TrajectoryRow {
    SondeReading reading;
    Vec2 waypoint;  // target pursued after this reading; the reading position on the final row
};

struct UncertaintyRow {
    int step = 0;
    double time_s = 0.0;
    SciWidths sci;
    Vec2 estimate;
};

struct PlannerTraceRow {
    int step = 0;
    CandidateScore score;
    bool selected = false;
};

// Optional per-run records. Planner traces are only kept when requested.
struct MissionLog {
    bool record_planner_trace = false;
    std::vector<TrajectoryRow> trajectory;
    std::vector<UncertaintyRow> uncertainty;
    std::vector<PlannerTraceRow> planner_trace;
    std::vector<std::string> events;
    std::optional<GridBelief> final_belief;
    double threshold = 0.0;
};

// Cancellation flag plus the completed result. request_cancel may be called
// from any thread; the mission polls it at update boundaries.
class MissionHandle {
public:
    void request_cancel() noexcept { cancel_.store(true, std::memory_order_relaxed); }
    bool cancel_requested() const noexcept { return cancel_.load(std::memory_order_relaxed); }

    void publish(const TrackResult& result);
    std::optional<TrackResult> result() const;
    TrackResult wait() const;

private:
    std::atomic<bool> cancel_{false};
    mutable std::mutex mutex_;
    mutable std::condition_variable done_;
    std::optional<TrackResult> result_;
};

class FeedbackOverflow : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using FeedbackSink = std::function<void(const MissionFeedback&)>;

// Bounded thread-safe feedback channel. A push into a full queue throws
// FeedbackOverflow rather than dropping anything.
class FeedbackQueue {
public:
    explicit FeedbackQueue(std::size_t capacity = 1 << 20) : capacity_(capacity) {}

    void push(const MissionFeedback& fb);
    std::optional<MissionFeedback> try_pop();
    std::vector<MissionFeedback> drain();
    std::size_t size() const;

    FeedbackSink sink() {
        return [this](const MissionFeedback& fb) { push(fb); };
    }

private:
    std::size_t capacity_;
    mutable std::mutex mutex_;
    std::deque<MissionFeedback> items_;
};

// Plume after warmup and the detection threshold used by the sonde.
struct PreparedWorld {
    ScalarField field;
    double threshold = 0.0;
};

PreparedWorld prepare_world(const Scenario& scenario);

// Closed tracking loop: read, update the belief, check the credible-interval
// stop rule, plan, travel. Publishes the result on `handle` when given.
TrackResult run_mission(const MissionGoal& goal, Rng& rng, const FeedbackSink& feedback,
                        MissionHandle* handle = nullptr, MissionLog* log = nullptr);

// Same as above against a world prepared earlier (shared across trials).
TrackResult run_mission(const MissionGoal& goal, const PreparedWorld& world, Rng& rng,
                        const FeedbackSink& feedback, MissionHandle* handle = nullptr, MissionLog* log = nullptr);

// Requests cancellation and blocks until the mission publishes its result.
// A completed mission's result is returned unchanged.
TrackResult cancel_mission(MissionHandle& handle);

}  // namespace plumetrack
