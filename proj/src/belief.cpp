#include "plumetrack/belief.hpp"

#include <cmath>
#include <numeric>
#include <ostream>

#include "plumetrack/errors.hpp"
#include "plumetrack/kernel.hpp"
#include "plumetrack/format.hpp"

namespace plumetrack {

namespace {

void check_weights(std::span<const double> w, std::size_t expected, const char* what) {
    if (w.size() != expected) throw ValidationError(std::string(what) + " size does not match the grid");
    for (double v : w) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw ValidationError(std::string(what) + " entries must be finite and non-negative");
    }
}

LikelihoodField expand(const GridGeometry& g, const CoveredBlock& block) {
    std::vector<double> w(g.cell_count());
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) w[g.flat({i, j})] = block.weights[block.slot(i, j)];
    }
    return LikelihoodField(g, std::move(w));
}

}  // namespace

GridBelief::GridBelief(GridGeometry geometry, std::vector<double> probs)
    : geometry_(geometry), probs_(std::move(probs)) {
    check_weights(probs_, geometry_.cell_count(), "belief");
    const double total = std::accumulate(probs_.begin(), probs_.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-9) throw ValidationError("belief probabilities must sum to 1");
}

GridBelief GridBelief::from_weights(GridGeometry geometry, std::vector<double> weights) {
    check_weights(weights, geometry.cell_count(), "belief weights");
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (!(total > 0.0) || !std::isfinite(total)) throw DegenerateUpdateError("belief weights have zero total mass");
    for (double& w : weights) w /= total;
    return GridBelief(geometry, std::move(weights));
}

LikelihoodField::LikelihoodField(GridGeometry geometry, std::vector<double> weights)
    : geometry_(geometry), weights_(std::move(weights)) {
    check_weights(weights_, geometry_.cell_count(), "likelihood");
    bool positive = false;
    for (double v : weights_) positive = positive || v > 0.0;
    if (!positive) throw ValidationError("likelihood must have at least one positive weight");
}

void MeasurementContext::validate() const {
    if (!(sigma2_hit > 0.0) || !(sigma2_miss > 0.0)) throw ValidationError("kernel variances must be positive");
    if (std::abs(norm(flow_dir) - 1.0) > 1e-9) throw ValidationError("flow direction must be a unit vector");
    if (local_radius_cells < 0) throw ValidationError("local radius must be >= 0");
}

GridBelief uniform_belief(const GridGeometry& geometry) {
    const double p = 1.0 / static_cast<double>(geometry.cell_count());
    return GridBelief(geometry, std::vector<double>(geometry.cell_count(), p));
}

Vec2 point_estimate(const GridBelief& belief) {
    const GridGeometry& g = belief.geometry();
    double x = 0.0;
    double y = 0.0;
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
            const double p = belief.at({i, j});
            x += g.centre_x(i) * p;
            y += g.centre_y(j) * p;
        }
    }
    return {x, y};
}

LikelihoodField detection_likelihood(const MeasurementContext& ctx, const GridGeometry& geometry) {
    ctx.validate();
    return expand(geometry,
                  detection_block(geometry, ctx.usv_pos, ctx.flow_dir, ctx.sigma2_hit, ctx.local_radius_cells));
}

LikelihoodField miss_likelihood(const MeasurementContext& ctx, const GridGeometry& geometry) {
    ctx.validate();
    auto block = miss_block(geometry, ctx.usv_pos, ctx.last_hit_pos, ctx.sigma2_miss, ctx.local_radius_cells);
    if (!block) {
        (void)geometry.cell_of(ctx.usv_pos);
        return LikelihoodField(geometry, std::vector<double>(geometry.cell_count(), 1.0));
    }
    return expand(geometry, *block);
}

GridBelief bayes_update(const GridBelief& belief, const LikelihoodField& like) {
    if (!(belief.geometry() == like.geometry()))
        throw ValidationError("belief and likelihood are defined on different grids");
    std::vector<double> post(belief.size());
    const auto prior = belief.probs();
    const auto weights = like.weights();
    double total = 0.0;
    for (std::size_t k = 0; k < post.size(); ++k) {
        post[k] = prior[k] * weights[k];
        total += post[k];
    }
    if (!(total > 0.0) || !std::isfinite(total))
        throw DegenerateUpdateError("likelihood annihilates the prior");
    for (double& p : post) p /= total;
    return GridBelief(belief.geometry(), std::move(post));
}

void write_belief_csv(std::ostream& out, const GridBelief& belief) {
    const GridGeometry& g = belief.geometry();
    out << "i,j,x_m,y_m,probability\n";
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
            out << i << ',' << j << ',' << format_real(g.centre_x(i)) << ',' << format_real(g.centre_y(j)) << ','
                << format_real(belief.at({i, j})) << '\n';
        }
    }
}

}  // namespace plumetrack
