#pragma once

#include <cmath>
#include <compare>
#include <cstddef>

namespace plumetrack {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend constexpr bool operator==(Vec2, Vec2) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(b - a); }

// Unit vector along `a`; the zero vector maps to itself.
Vec2 normalized(Vec2 a);

// Unsigned angle between two non-zero vectors, in [0, pi].
double angle_between(Vec2 a, Vec2 b);

struct CellIndex {
    int i = 0;
    int j = 0;

    friend constexpr bool operator==(CellIndex, CellIndex) = default;
};

// Uniform square grid of nx * ny cells with edge h, centred on `origin`.
// Flat storage is row-major with j outer and i inner.
class GridGeometry {
public:
    GridGeometry(int nx, int ny, double h, Vec2 origin = {});

    int nx() const noexcept { return nx_; }
    int ny() const noexcept { return ny_; }
    double cell_size() const noexcept { return h_; }
    Vec2 origin() const noexcept { return origin_; }
    std::size_t cell_count() const noexcept { return static_cast<std::size_t>(nx_) * ny_; }

    Vec2 lower() const noexcept;
    Vec2 upper() const noexcept;

    std::size_t flat(CellIndex c) const noexcept {
        return static_cast<std::size_t>(c.j) * nx_ + c.i;
    }
    CellIndex unflat(std::size_t k) const noexcept {
        return {static_cast<int>(k % nx_), static_cast<int>(k / nx_)};
    }
    bool in_grid(CellIndex c) const noexcept {
        return c.i >= 0 && c.i < nx_ && c.j >= 0 && c.j < ny_;
    }

    Vec2 centre(CellIndex c) const noexcept;
    double centre_x(int i) const noexcept;
    double centre_y(int j) const noexcept;

    // Closed-rectangle test against the workspace bounds.
    bool contains(Vec2 p) const noexcept;

    // Cell whose half-open extent holds p; points on the upper workspace
    // edge belong to the last cell. Throws OutOfBoundsError outside.
    CellIndex cell_of(Vec2 p) const;

    friend bool operator==(const GridGeometry&, const GridGeometry&) = default;

private:
    int nx_;
    int ny_;
    double h_;
    Vec2 origin_;
};

}  // namespace plumetrack
