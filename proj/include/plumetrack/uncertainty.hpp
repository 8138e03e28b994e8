#pragma once

#include <cstddef>
#include <vector>

#include "plumetrack/belief.hpp"

namespace plumetrack {

enum class Axis { x, y };

struct MarginalDist {
    Axis axis = Axis::x;
    std::vector<double> probs;
    double cell_size = 1.0;
};

// Inclusive index interval [lower, upper] and the mass it holds.
struct CredibleInterval {
    std::size_t lower = 0;
    std::size_t upper = 0;
    double mass = 0.0;

    std::size_t length() const noexcept { return upper - lower + 1; }
};

struct SciWidths {
    double x_m = 0.0;
    double y_m = 0.0;
};

// Slack on mass comparisons so that an interval holding exactly gamma in
// exact arithmetic still qualifies after floating-point summation, and
// equal-mass intervals compare as ties.
inline constexpr double kMassTolerance = 1e-12;

MarginalDist marginal(const GridBelief& belief, Axis axis);

// Shortest contiguous interval holding at least gamma; ties on length go to
// the greater mass, then to the smaller lower bound. Linear time.
CredibleInterval smallest_credible_interval(const MarginalDist& dist, double gamma);

// Width of each axis' smallest credible interval, (upper - lower + 1) * h.
SciWidths sci_widths(const GridBelief& belief, double gamma);

bool termination_check(SciWidths widths, double tau_m);

}  // namespace plumetrack
