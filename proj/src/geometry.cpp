#include "plumetrack/geometry.hpp"

#include <algorithm>
#include <string>

#include "plumetrack/errors.hpp"

namespace plumetrack {

Vec2 normalized(Vec2 a) {
    const double n = norm(a);
    if (n == 0.0) return a;
    return {a.x / n, a.y / n};
}

double angle_between(Vec2 a, Vec2 b) {
    return std::atan2(std::abs(cross(a, b)), dot(a, b));
}

GridGeometry::GridGeometry(int nx, int ny, double h, Vec2 origin)
    : nx_(nx), ny_(ny), h_(h), origin_(origin) {
    if (nx < 1 || ny < 1) throw ValidationError("grid dimensions must be >= 1");
    if (!(h > 0.0) || !std::isfinite(h)) throw ValidationError("cell size must be positive");
    if (!std::isfinite(origin.x) || !std::isfinite(origin.y))
        throw ValidationError("grid origin must be finite");
}

Vec2 GridGeometry::lower() const noexcept {
    return {origin_.x - 0.5 * nx_ * h_, origin_.y - 0.5 * ny_ * h_};
}

Vec2 GridGeometry::upper() const noexcept {
    return {origin_.x + 0.5 * nx_ * h_, origin_.y + 0.5 * ny_ * h_};
}

double GridGeometry::centre_x(int i) const noexcept {
    return origin_.x + (i - 0.5 * (nx_ - 1)) * h_;
}

double GridGeometry::centre_y(int j) const noexcept {
    return origin_.y + (j - 0.5 * (ny_ - 1)) * h_;
}

Vec2 GridGeometry::centre(CellIndex c) const noexcept {
    return {centre_x(c.i), centre_y(c.j)};
}

bool GridGeometry::contains(Vec2 p) const noexcept {
    const Vec2 lo = lower();
    const Vec2 hi = upper();
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
}

CellIndex GridGeometry::cell_of(Vec2 p) const {
    if (!contains(p)) {
        throw OutOfBoundsError("position (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                               ") lies outside the workspace");
    }
    const Vec2 lo = lower();
    const int i = std::clamp(static_cast<int>(std::floor((p.x - lo.x) / h_)), 0, nx_ - 1);
    const int j = std::clamp(static_cast<int>(std::floor((p.y - lo.y) / h_)), 0, ny_ - 1);
    return {i, j};
}

}  // namespace plumetrack
