#pragma once

// Local measurement kernels shared by the belief update and the planner.
// A kernel is evaluated on a block of cells around the vehicle; every cell
// outside the block takes the weight of its nearest block cell, which for an
// axis-aligned block is the per-axis clamp of its index.

#include <optional>
#include <vector>

#include "plumetrack/geometry.hpp"

namespace plumetrack {

inline double angular_gaussian(double angle, double variance) {
    return std::exp(-angle * angle / (2.0 * variance));
}

struct CoveredBlock {
    int i0 = 0, i1 = 0, j0 = 0, j1 = 0;  // inclusive bounds
    std::vector<double> weights;         // row-major inside the block
    std::vector<double> log_weights;

    int width() const noexcept { return i1 - i0 + 1; }
    std::size_t slot(int i, int j) const noexcept {
        const int ci = i < i0 ? i0 : (i > i1 ? i1 : i);
        const int cj = j < j0 ? j0 : (j > j1 ? j1 : j);
        return static_cast<std::size_t>(cj - j0) * width() + (ci - i0);
    }
};

// Cells within Chebyshev distance `radius` of `centre`, clipped to the grid.
CoveredBlock make_block(const GridGeometry& g, CellIndex centre, int radius);

// Detection kernel around a vehicle at `vehicle_pos`: weight depends on the
// angle between (vehicle - cell) and `flow_dir`; the vehicle's cell gets 1.
CoveredBlock detection_block(const GridGeometry& g, Vec2 vehicle_pos, Vec2 flow_dir, double variance,
                             int radius);

// Miss kernel: weight depends on the angle between (cell - vehicle) and
// (last_hit - vehicle); the vehicle's cell takes the smallest block weight.
// Empty when the miss carries no directional information.
std::optional<CoveredBlock> miss_block(const GridGeometry& g, Vec2 vehicle_pos, std::optional<Vec2> last_hit,
                                       double variance, int radius);

}  // namespace plumetrack
