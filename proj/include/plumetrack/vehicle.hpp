#pragma once

#include <random>

#include "plumetrack/field.hpp"
#include "plumetrack/geometry.hpp"

namespace plumetrack {

using Rng = std::mt19937_64;

struct UsvState {
    Vec2 position;
    double speed = 2.0;  // m/s
    double time = 0.0;   // s
};

struct SondeSpec {
    double threshold = 0.0;
    double noise_std = 0.0;
    double sample_period = 1.0;

    void validate() const;
};

struct SondeReading {
    double time = 0.0;
    Vec2 position;
    double concentration = 0.0;
    bool detected = false;  // concentration >= threshold
};

// Straight-line constant-speed motion towards `waypoint`, clamped on arrival.
UsvState advance_towards(const UsvState& state, Vec2 waypoint, double dt, const GridGeometry& geometry);

// Samples the field at the vehicle position. The generator is only drawn
// from when noise_std > 0.
SondeReading take_reading(const ScalarField& field, const UsvState& state, const SondeSpec& sonde, Rng& rng);

// Detection threshold as a fraction of the field's peak concentration.
double calibrate_threshold(const ScalarField& field, double fraction);

}  // namespace plumetrack
