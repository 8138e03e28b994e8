#include "plumetrack/mission.hpp"

#include <cmath>

#include "plumetrack/errors.hpp"

namespace plumetrack {

MissionGoal MissionGoal::from_scenario(Scenario scenario) {
    MissionGoal goal;
    goal.gamma = scenario.gamma;
    goal.tau_m = scenario.tau_m;
    goal.max_updates = scenario.max_updates;
    goal.max_sim_time_s = scenario.max_sim_time_s;
    goal.scenario = std::make_shared<const Scenario>(std::move(scenario));
    return goal;
}

void MissionGoal::validate() const {
    if (!scenario) throw ValidationError("mission goal has no scenario");
    if (!(gamma > 0.0 && gamma < 1.0)) throw ValidationError("gamma must lie in (0, 1)");
    if (!(tau_m > 0.0)) throw ValidationError("tau_m must be positive");
    if (max_updates < 0) throw ValidationError("max_updates must be >= 0");
    if (!(max_sim_time_s > 0.0)) throw ValidationError("max_sim_time_s must be positive");
}

const char* to_string(MissionStatus status) {
    switch (status) {
        case MissionStatus::succeeded: return "succeeded";
        case MissionStatus::aborted: return "aborted";
        case MissionStatus::canceled: return "canceled";
    }
    return "unknown";
}

void MissionHandle::publish(const TrackResult& result) {
    {
        std::lock_guard lock(mutex_);
        if (!result_) result_ = result;
    }
    done_.notify_all();
}

std::optional<TrackResult> MissionHandle::result() const {
    std::lock_guard lock(mutex_);
    return result_;
}

TrackResult MissionHandle::wait() const {
    std::unique_lock lock(mutex_);
    done_.wait(lock, [&] { return result_.has_value(); });
    return *result_;
}

TrackResult cancel_mission(MissionHandle& handle) {
    if (auto done = handle.result()) return *done;
    handle.request_cancel();
    return handle.wait();
}

void FeedbackQueue::push(const MissionFeedback& fb) {
    std::lock_guard lock(mutex_);
    if (items_.size() >= capacity_) throw FeedbackOverflow("mission feedback queue is full");
    items_.push_back(fb);
}

std::optional<MissionFeedback> FeedbackQueue::try_pop() {
    std::lock_guard lock(mutex_);
    if (items_.empty()) return std::nullopt;
    MissionFeedback fb = items_.front();
    items_.pop_front();
    return fb;
}

std::vector<MissionFeedback> FeedbackQueue::drain() {
    std::lock_guard lock(mutex_);
    std::vector<MissionFeedback> out(items_.begin(), items_.end());
    items_.clear();
    return out;
}

std::size_t FeedbackQueue::size() const {
    std::lock_guard lock(mutex_);
    return items_.size();
}

PreparedWorld prepare_world(const Scenario& scenario) {
    scenario.validate();
    ScalarField field = run_warmup(init_field(scenario.geometry(), 0.0), scenario.flow(), scenario.source(),
                                   scenario.warmup_s, scenario.dt);
    const double threshold =
        scenario.threshold ? *scenario.threshold : calibrate_threshold(field, scenario.threshold_fraction);
    return {std::move(field), threshold};
}

namespace {

// State of one tracking run; each public step mirrors one stage of the loop.
class Tracker {
public:
    Tracker(const MissionGoal& goal, const PreparedWorld& world, Rng& rng, const FeedbackSink& feedback,
            MissionHandle* handle, MissionLog* log)
        : goal_(goal),
          s_(*goal.scenario),
          geometry_(s_.geometry()),
          field_(world.field),
          rng_(rng),
          feedback_(feedback),
          handle_(handle),
          log_(log),
          belief_(uniform_belief(geometry_)) {
        sonde_.threshold = world.threshold;
        sonde_.noise_std = s_.noise_std;
        sonde_.sample_period = s_.sample_period;
        sonde_.validate();

        usv_.position = s_.usv_start;
        usv_.speed = s_.usv_speed;
        usv_.time = 0.0;

        ctx_.flow_dir = normalized(s_.velocity);
        ctx_.sigma2_hit = s_.planner.sigma2_hit;
        ctx_.sigma2_miss = s_.planner.sigma2_miss;
        ctx_.local_radius_cells = s_.local_radius_cells;

        sci_ = sci_widths(belief_, goal_.gamma);
        estimate_ = point_estimate(belief_);
        if (log_) log_->threshold = world.threshold;
    }

    TrackResult run() {
        for (;;) {
            if (auto stop = halted()) return finish(*stop);
            if (update(take_reading(field_, usv_, sonde_, rng_))) return finish(MissionStatus::succeeded);

            const CellIndex target = plan();
            const Vec2 waypoint = geometry_.centre(target);
            if (log_) log_->trajectory.back().waypoint = waypoint;

            double since_reading = 0.0;
            while (usv_.position != waypoint) {
                field_ = step(field_, s_.flow(), s_.source(), s_.dt);
                usv_ = advance_towards(usv_, waypoint, s_.dt, geometry_);
                since_reading += s_.dt;
                if (s_.measure_mode == MeasureMode::continuous && usv_.position != waypoint &&
                    since_reading >= s_.sample_period * (1.0 - 1e-9)) {
                    since_reading = 0.0;
                    if (auto stop = halted()) return finish(*stop);
                    if (update(take_reading(field_, usv_, sonde_, rng_))) return finish(MissionStatus::succeeded);
                    if (log_) log_->trajectory.back().waypoint = waypoint;
                }
            }
        }
    }

private:
    std::optional<MissionStatus> halted() const {
        if (handle_ && handle_->cancel_requested()) return MissionStatus::canceled;
        if (updates_ >= goal_.max_updates || usv_.time >= goal_.max_sim_time_s) return MissionStatus::aborted;
        return std::nullopt;
    }

    // Bayes update from one reading; true when the stop rule is met.
    bool update(const SondeReading& reading) {
        ctx_.usv_pos = reading.position;
        const LikelihoodField like =
            reading.detected ? detection_likelihood(ctx_, geometry_) : miss_likelihood(ctx_, geometry_);
        try {
            belief_ = bayes_update(belief_, like);
        } catch (const DegenerateUpdateError& e) {
            ++degenerate_;
            if (log_) log_->events.push_back("update " + std::to_string(updates_ + 1) + ": " + e.what());
        }
        ++updates_;
        if (reading.detected) ctx_.last_hit_pos = reading.position;

        sci_ = sci_widths(belief_, goal_.gamma);
        estimate_ = point_estimate(belief_);

        MissionFeedback fb;
        fb.step = updates_;
        fb.sim_time_s = usv_.time;
        fb.estimate = estimate_;
        fb.sci = sci_;
        fb.usv_position = usv_.position;
        fb.last_z = reading.detected;
        if (feedback_) feedback_(fb);

        if (log_) {
            log_->trajectory.push_back({reading, reading.position});
            log_->uncertainty.push_back({updates_, usv_.time, sci_, estimate_});
        }
        return termination_check(sci_, goal_.tau_m);
    }

    CellIndex plan() {
        ctx_.usv_pos = usv_.position;
        const CellIndex here = geometry_.cell_of(usv_.position);
        std::vector<CandidateScore> scores;
        const CellIndex chosen = select_waypoint(belief_, here, ctx_, s_.planner, &scores);
        if (log_ && log_->record_planner_trace) {
            for (const auto& sc : scores) log_->planner_trace.push_back({updates_, sc, sc.cell == chosen});
        }
        return chosen;
    }

    TrackResult finish(MissionStatus status) {
        TrackResult r;
        r.status = status;
        r.estimate = estimate_;
        r.sci = sci_;
        r.error_m = distance(estimate_, s_.source_position);
        r.updates = updates_;
        r.sim_time_s = usv_.time;
        r.degenerate_updates = degenerate_;
        if (log_) log_->final_belief = belief_;
        return r;
    }

    const MissionGoal& goal_;
    const Scenario& s_;
    GridGeometry geometry_;
    ScalarField field_;
    Rng& rng_;
    const FeedbackSink& feedback_;
    MissionHandle* handle_;
    MissionLog* log_;

    GridBelief belief_;
    MeasurementContext ctx_;
    SondeSpec sonde_;
    UsvState usv_;
    SciWidths sci_;
    Vec2 estimate_;
    int updates_ = 0;
    int degenerate_ = 0;
};

}  // namespace

TrackResult run_mission(const MissionGoal& goal, const PreparedWorld& world, Rng& rng, const FeedbackSink& feedback,
                        MissionHandle* handle, MissionLog* log) {
    goal.validate();
    goal.scenario->validate();
    if (!(world.field.geometry() == goal.scenario->geometry()))
        throw ValidationError("prepared world does not match the scenario grid");
    TrackResult result = Tracker(goal, world, rng, feedback, handle, log).run();
    if (handle) handle->publish(result);
    return result;
}

TrackResult run_mission(const MissionGoal& goal, Rng& rng, const FeedbackSink& feedback, MissionHandle* handle,
                        MissionLog* log) {
    goal.validate();
    return run_mission(goal, prepare_world(*goal.scenario), rng, feedback, handle, log);
}

}  // namespace plumetrack
