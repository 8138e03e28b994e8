#include "plumetrack/uncertainty.hpp"

#include <algorithm>
#include <numeric>

#include "plumetrack/errors.hpp"

namespace plumetrack {

MarginalDist marginal(const GridBelief& belief, Axis axis) {
    const GridGeometry& g = belief.geometry();
    MarginalDist out;
    out.axis = axis;
    out.cell_size = g.cell_size();
    out.probs.assign(axis == Axis::x ? g.nx() : g.ny(), 0.0);
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) out.probs[axis == Axis::x ? i : j] += belief.at({i, j});
    }
    const double total = std::accumulate(out.probs.begin(), out.probs.end(), 0.0);
    for (double& p : out.probs) p /= total;
    return out;
}

CredibleInterval smallest_credible_interval(const MarginalDist& dist, double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw ValidationError("gamma must lie in (0, 1)");
    const auto& p = dist.probs;
    const std::size_t k = p.size();
    if (k == 0) throw ValidationError("empty marginal distribution");

    std::vector<double> prefix(k + 1, 0.0);
    for (std::size_t i = 0; i < k; ++i) prefix[i + 1] = prefix[i] + p[i];
    auto mass = [&](std::size_t lo, std::size_t hi) { return prefix[hi + 1] - prefix[lo]; };
    const double target = gamma - kMassTolerance;

    // Two-pointer sweep for the minimal qualifying length.
    std::size_t best_len = k;
    std::size_t lo = 0;
    for (std::size_t hi = 0; hi < k; ++hi) {
        while (lo < hi && mass(lo + 1, hi) >= target) ++lo;
        if (mass(lo, hi) >= target) best_len = std::min(best_len, hi - lo + 1);
    }

    double top = 0.0;
    for (std::size_t start = 0; start + best_len <= k; ++start)
        top = std::max(top, mass(start, start + best_len - 1));
    for (std::size_t start = 0; start + best_len <= k; ++start) {
        const double m = mass(start, start + best_len - 1);
        if (m >= top - kMassTolerance) return {start, start + best_len - 1, m};
    }
    return {0, k - 1, mass(0, k - 1)};
}

SciWidths sci_widths(const GridBelief& belief, double gamma) {
    const double h = belief.geometry().cell_size();
    const auto wx = smallest_credible_interval(marginal(belief, Axis::x), gamma);
    const auto wy = smallest_credible_interval(marginal(belief, Axis::y), gamma);
    return {static_cast<double>(wx.length()) * h, static_cast<double>(wy.length()) * h};
}

bool termination_check(SciWidths widths, double tau_m) {
    if (!(tau_m > 0.0)) throw ValidationError("tau must be positive");
    return widths.x_m <= tau_m && widths.y_m <= tau_m;
}

}  // namespace plumetrack
