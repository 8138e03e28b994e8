#pragma once

#include <cmath>
#include <vector>

#include "plumetrack/field.hpp"
#include "plumetrack/geometry.hpp"

namespace fixtures {

using namespace plumetrack;

inline constexpr double kPi = 3.14159265358979323846;

// Unit-mass Gaussian blob sampled on cell centres.
inline ScalarField gaussian_blob(const GridGeometry& g, Vec2 centre, double sigma, double mass = 1.0) {
    std::vector<double> v(g.cell_count());
    const double norm = mass / (2.0 * kPi * sigma * sigma);
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
            const Vec2 d = g.centre({i, j}) - centre;
            v[g.flat({i, j})] = norm * std::exp(-(d.x * d.x + d.y * d.y) / (2.0 * sigma * sigma));
        }
    }
    return ScalarField(g, std::move(v));
}

// Relative L1 distance between upwind transport of a blob and its exact
// translation after `duration` seconds at velocity `v` (no diffusion).
inline double blob_translation_error(double h, double sigma, Vec2 start, Vec2 v, double duration, double courant) {
    const GridGeometry g(static_cast<int>(std::lround(500.0 / h)), static_cast<int>(std::lround(250.0 / h)), h);
    ScalarField f = gaussian_blob(g, start, sigma);
    const double speed = std::abs(v.x) + std::abs(v.y);
    const int steps = static_cast<int>(std::ceil(duration * speed / (courant * h)));
    const double dt = duration / steps;
    for (int n = 0; n < steps; ++n) f = step(f, {v, 0.0}, {start, 0.0}, dt);
    const ScalarField exact = gaussian_blob(g, start + duration * v, sigma);
    double diff = 0.0;
    double mass = 0.0;
    for (std::size_t k = 0; k < g.cell_count(); ++k) {
        diff += std::abs(f.values()[k] - exact.values()[k]);
        mass += exact.values()[k];
    }
    return diff / mass;
}

}  // namespace fixtures
