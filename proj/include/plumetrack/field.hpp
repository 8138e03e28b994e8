#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "plumetrack/geometry.hpp"

namespace plumetrack {

// Uniform transport: wave velocity (m/s) and diffusivity (m^2/s).
struct FlowSpec {
    Vec2 velocity;
    double diffusivity = 0.0;
};

// Continuous point release (kg/s) injected into the cell holding `position`.
struct SourceSpec {
    Vec2 position;
    double rate = 0.0;
};

enum class Boundary {
    zero_gradient,  // open outflow, ghost cells mirror the interior
    closed,         // no flux through the workspace edge
};

// Depth-averaged concentration (kg/m^2, unit depth) on cell centres.
class ScalarField {
public:
    ScalarField(GridGeometry geometry, std::vector<double> values, double time = 0.0);

    const GridGeometry& geometry() const noexcept { return geometry_; }
    std::span<const double> values() const noexcept { return values_; }
    double at(CellIndex c) const { return values_[geometry_.flat(c)]; }
    double time() const noexcept { return time_; }

    // Integral of concentration over the workspace (kg).
    double total_mass() const;
    double max_value() const;

private:
    friend ScalarField step(const ScalarField&, const FlowSpec&, const SourceSpec&, double, Boundary);

    GridGeometry geometry_;
    std::vector<double> values_;
    double time_;
};

ScalarField init_field(const GridGeometry& geometry, double c0);

// Largest dt with (|vx| + |vy|) dt / h <= cfl and 4 lambda dt / h^2 <= cfl.
// Infinite when there is no transport at all.
double max_stable_dt(const FlowSpec& flow, const GridGeometry& geometry, double cfl);

// One explicit step: upwind advection, then central diffusion, then injection
// of rate * dt / h^2 into the source cell. Throws StabilityError when dt
// exceeds max_stable_dt(flow, geometry, 1).
ScalarField step(const ScalarField& field, const FlowSpec& flow, const SourceSpec& source, double dt,
                 Boundary boundary = Boundary::zero_gradient);

// Steps with fixed dt until field.time() >= until_time.
ScalarField run_warmup(ScalarField field, const FlowSpec& flow, const SourceSpec& source,
                       double until_time, double dt, Boundary boundary = Boundary::zero_gradient);

// Bilinear interpolation between cell centres; constant extrapolation in the
// half-cell band along the workspace edge. Throws OutOfBoundsError outside.
double sample_concentration(const ScalarField& field, Vec2 position);

// CSV snapshot: i,j,x_m,y_m,concentration (j outer, i inner).
void write_field_csv(std::ostream& out, const ScalarField& field);

}  // namespace plumetrack
