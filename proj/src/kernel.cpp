#include "plumetrack/kernel.hpp"

#include <algorithm>
#include <cmath>

#include "plumetrack/errors.hpp"

namespace plumetrack {

CoveredBlock make_block(const GridGeometry& g, CellIndex centre, int radius) {
    if (radius < 0) throw ValidationError("local radius must be >= 0");
    CoveredBlock b;
    b.i0 = std::max(0, centre.i - radius);
    b.i1 = std::min(g.nx() - 1, centre.i + radius);
    b.j0 = std::max(0, centre.j - radius);
    b.j1 = std::min(g.ny() - 1, centre.j + radius);
    const std::size_t n = static_cast<std::size_t>(b.width()) * (b.j1 - b.j0 + 1);
    b.weights.assign(n, 1.0);
    b.log_weights.assign(n, 0.0);
    return b;
}

CoveredBlock detection_block(const GridGeometry& g, Vec2 vehicle_pos, Vec2 flow_dir, double variance,
                             int radius) {
    const CellIndex own = g.cell_of(vehicle_pos);
    CoveredBlock b = make_block(g, own, radius);
    for (int j = b.j0; j <= b.j1; ++j) {
        for (int i = b.i0; i <= b.i1; ++i) {
            if (CellIndex{i, j} == own) continue;
            const double theta = angle_between(vehicle_pos - g.centre({i, j}), flow_dir);
            const std::size_t s = b.slot(i, j);
            b.log_weights[s] = -theta * theta / (2.0 * variance);
            b.weights[s] = std::exp(b.log_weights[s]);
        }
    }
    return b;
}

std::optional<CoveredBlock> miss_block(const GridGeometry& g, Vec2 vehicle_pos, std::optional<Vec2> last_hit,
                                       double variance, int radius) {
    if (!last_hit) return std::nullopt;
    const Vec2 towards_hit = *last_hit - vehicle_pos;
    if (norm(towards_hit) == 0.0) return std::nullopt;

    const CellIndex own = g.cell_of(vehicle_pos);
    CoveredBlock b = make_block(g, own, radius);
    double min_log = 0.0;
    bool any = false;
    for (int j = b.j0; j <= b.j1; ++j) {
        for (int i = b.i0; i <= b.i1; ++i) {
            if (CellIndex{i, j} == own) continue;
            const double phi = angle_between(g.centre({i, j}) - vehicle_pos, towards_hit);
            const std::size_t s = b.slot(i, j);
            b.log_weights[s] = -phi * phi / (2.0 * variance);
            b.weights[s] = std::exp(b.log_weights[s]);
            min_log = any ? std::min(min_log, b.log_weights[s]) : b.log_weights[s];
            any = true;
        }
    }
    const std::size_t s = b.slot(own.i, own.j);
    b.log_weights[s] = min_log;
    b.weights[s] = std::exp(min_log);
    return b;
}

}  // namespace plumetrack
