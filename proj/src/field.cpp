#include "plumetrack/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

#include "plumetrack/errors.hpp"
#include "plumetrack/format.hpp"

namespace plumetrack {

ScalarField::ScalarField(GridGeometry geometry, std::vector<double> values, double time)
    : geometry_(geometry), values_(std::move(values)), time_(time) {
    if (values_.size() != geometry_.cell_count())
        throw ValidationError("field value count does not match the grid");
    for (double v : values_) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw ValidationError("field values must be finite and non-negative");
    }
}

double ScalarField::total_mass() const {
    const double area = geometry_.cell_size() * geometry_.cell_size();
    return area * std::accumulate(values_.begin(), values_.end(), 0.0);
}

double ScalarField::max_value() const {
    return *std::max_element(values_.begin(), values_.end());
}

ScalarField init_field(const GridGeometry& geometry, double c0) {
    if (!(c0 >= 0.0) || !std::isfinite(c0))
        throw ValidationError("initial concentration must be finite and >= 0");
    return ScalarField(geometry, std::vector<double>(geometry.cell_count(), c0), 0.0);
}

double max_stable_dt(const FlowSpec& flow, const GridGeometry& geometry, double cfl) {
    if (!(cfl > 0.0 && cfl <= 1.0)) throw ValidationError("cfl must lie in (0, 1]");
    const double h = geometry.cell_size();
    const double speed = std::abs(flow.velocity.x) + std::abs(flow.velocity.y);
    double dt = std::numeric_limits<double>::infinity();
    if (speed > 0.0) dt = std::min(dt, cfl * h / speed);
    if (flow.diffusivity > 0.0) dt = std::min(dt, cfl * h * h / (4.0 * flow.diffusivity));
    return dt;
}

namespace {

void check_flow(const FlowSpec& flow) {
    if (!std::isfinite(flow.velocity.x) || !std::isfinite(flow.velocity.y))
        throw ValidationError("flow velocity must be finite");
    if (!(flow.diffusivity >= 0.0) || !std::isfinite(flow.diffusivity))
        throw ValidationError("diffusivity must be finite and >= 0");
}

// Upwind flux-form advection with uniform velocity. Face fluxes on the
// workspace edge use a mirrored ghost cell (zero-gradient) or vanish (closed).
void advect(const GridGeometry& g, std::span<const double> c, std::span<double> out, Vec2 v, double dt,
            Boundary boundary) {
    const int nx = g.nx();
    const int ny = g.ny();
    const double cx = v.x * dt / g.cell_size();
    const double cy = v.y * dt / g.cell_size();
    const bool open = boundary == Boundary::zero_gradient;

    auto value = [&](int i, int j) { return c[static_cast<std::size_t>(j) * nx + i]; };
    // Courant-scaled flux through the face between (i-1, j) and (i, j); i in [0, nx].
    auto x_face = [&](int i, int j) {
        if (i == 0 || i == nx) {
            if (!open) return 0.0;
            const int edge = i == 0 ? 0 : nx - 1;
            return cx * value(edge, j);
        }
        return cx >= 0.0 ? cx * value(i - 1, j) : cx * value(i, j);
    };
    auto y_face = [&](int i, int j) {
        if (j == 0 || j == ny) {
            if (!open) return 0.0;
            const int edge = j == 0 ? 0 : ny - 1;
            return cy * value(i, edge);
        }
        return cy >= 0.0 ? cy * value(i, j - 1) : cy * value(i, j);
    };

    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const double div = (x_face(i + 1, j) - x_face(i, j)) + (y_face(i, j + 1) - y_face(i, j));
            out[static_cast<std::size_t>(j) * nx + i] = value(i, j) - div;
        }
    }
}

// Five-point explicit diffusion; both boundary modes give zero normal flux.
void diffuse(const GridGeometry& g, std::span<const double> c, std::span<double> out, double lambda,
             double dt) {
    const int nx = g.nx();
    const int ny = g.ny();
    const double r = lambda * dt / (g.cell_size() * g.cell_size());
    auto value = [&](int i, int j) {
        i = std::clamp(i, 0, nx - 1);
        j = std::clamp(j, 0, ny - 1);
        return c[static_cast<std::size_t>(j) * nx + i];
    };
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const double centre = value(i, j);
            const double lap = value(i - 1, j) + value(i + 1, j) + value(i, j - 1) + value(i, j + 1) - 4.0 * centre;
            out[static_cast<std::size_t>(j) * nx + i] = centre + r * lap;
        }
    }
}

}  // namespace

ScalarField step(const ScalarField& field, const FlowSpec& flow, const SourceSpec& source, double dt,
                 Boundary boundary) {
    check_flow(flow);
    if (!(dt > 0.0)) throw ValidationError("time step must be positive");
    if (!(source.rate >= 0.0)) throw ValidationError("source rate must be >= 0");
    const GridGeometry& g = field.geometry();
    const double limit = max_stable_dt(flow, g, 1.0);
    if (dt > limit) {
        throw StabilityError("time step " + std::to_string(dt) + " s exceeds the stability bound " +
                             std::to_string(limit) + " s");
    }

    std::vector<double> work(field.values_.size());
    std::vector<double> next(field.values_.size());
    std::span<const double> current = field.values_;

    if (flow.velocity.x != 0.0 || flow.velocity.y != 0.0) {
        advect(g, current, work, flow.velocity, dt, boundary);
        current = work;
    }
    if (flow.diffusivity > 0.0) {
        diffuse(g, current, next, flow.diffusivity, dt);
    } else {
        std::copy(current.begin(), current.end(), next.begin());
    }
    // Cancellation in the flux difference can leave -1e-18 residue on a
    // field whose exact update is zero.
    for (double& v : next) v = std::max(v, 0.0);

    if (source.rate > 0.0) {
        const double h = g.cell_size();
        next[g.flat(g.cell_of(source.position))] += source.rate * dt / (h * h);
    }

    return ScalarField(g, std::move(next), field.time_ + dt);
}

ScalarField run_warmup(ScalarField field, const FlowSpec& flow, const SourceSpec& source, double until_time,
                       double dt, Boundary boundary) {
    if (!(until_time >= 0.0)) throw ValidationError("warmup duration must be >= 0");
    const double slack = 1e-9 * std::max(1.0, until_time);
    while (field.time() < until_time - slack) field = step(field, flow, source, dt, boundary);
    return field;
}

double sample_concentration(const ScalarField& field, Vec2 position) {
    const GridGeometry& g = field.geometry();
    if (!g.contains(position)) {
        throw OutOfBoundsError("sample position (" + std::to_string(position.x) + ", " +
                               std::to_string(position.y) + ") lies outside the workspace");
    }
    // Fractional index relative to the first cell centre.
    const double fx = (position.x - g.centre_x(0)) / g.cell_size();
    const double fy = (position.y - g.centre_y(0)) / g.cell_size();

    auto bracket = [](double f, int n, int& lo, int& hi, double& t) {
        if (n == 1 || f <= 0.0) {
            lo = hi = 0;
            t = 0.0;
        } else if (f >= n - 1) {
            lo = hi = n - 1;
            t = 0.0;
        } else {
            lo = static_cast<int>(std::floor(f));
            hi = lo + 1;
            t = f - lo;
        }
    };
    int i0, i1, j0, j1;
    double tx, ty;
    bracket(fx, g.nx(), i0, i1, tx);
    bracket(fy, g.ny(), j0, j1, ty);

    const double c00 = field.at({i0, j0});
    const double c10 = field.at({i1, j0});
    const double c01 = field.at({i0, j1});
    const double c11 = field.at({i1, j1});
    const double value = (1.0 - tx) * (1.0 - ty) * c00 + tx * (1.0 - ty) * c10 + (1.0 - tx) * ty * c01 +
                         tx * ty * c11;
    return std::max(value, 0.0);
}

void write_field_csv(std::ostream& out, const ScalarField& field) {
    const GridGeometry& g = field.geometry();
    out << "i,j,x_m,y_m,concentration\n";
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
            out << i << ',' << j << ',' << format_real(g.centre_x(i)) << ',' << format_real(g.centre_y(j)) << ','
                << format_real(field.at({i, j})) << '\n';
        }
    }
}

}  // namespace plumetrack
