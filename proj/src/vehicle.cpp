#include "plumetrack/vehicle.hpp"

#include <algorithm>
#include <cmath>

#include "plumetrack/errors.hpp"

namespace plumetrack {

void SondeSpec::validate() const {
    if (!(threshold > 0.0) || !std::isfinite(threshold)) throw ValidationError("sonde threshold must be positive");
    if (!(noise_std >= 0.0)) throw ValidationError("sonde noise_std must be >= 0");
    if (!(sample_period > 0.0)) throw ValidationError("sonde sample_period must be positive");
}

UsvState advance_towards(const UsvState& state, Vec2 waypoint, double dt, const GridGeometry& geometry) {
    if (!(dt > 0.0)) throw ValidationError("time step must be positive");
    if (!(state.speed > 0.0)) throw ValidationError("vehicle speed must be positive");
    if (!geometry.contains(waypoint)) throw OutOfBoundsError("waypoint lies outside the workspace");

    UsvState next = state;
    next.time += dt;
    const Vec2 offset = waypoint - state.position;
    const double remaining = norm(offset);
    const double reach = state.speed * dt;
    if (remaining <= reach * (1.0 + 1e-12)) {
        next.position = waypoint;
    } else {
        next.position = state.position + (reach / remaining) * offset;
    }
    return next;
}

SondeReading take_reading(const ScalarField& field, const UsvState& state, const SondeSpec& sonde, Rng& rng) {
    sonde.validate();
    double c = sample_concentration(field, state.position);
    if (sonde.noise_std > 0.0) {
        std::normal_distribution<double> noise(0.0, sonde.noise_std);
        c = std::max(0.0, c + noise(rng));
    }
    return {state.time, state.position, c, c >= sonde.threshold};
}

double calibrate_threshold(const ScalarField& field, double fraction) {
    if (!(fraction > 0.0 && fraction <= 1.0)) throw ValidationError("threshold fraction must lie in (0, 1]");
    const double peak = field.max_value();
    if (!(peak > 0.0)) throw ValidationError("cannot calibrate a detection threshold on an empty field");
    return fraction * peak;
}

}  // namespace plumetrack
