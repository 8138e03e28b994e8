#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "plumetrack/geometry.hpp"

namespace plumetrack {

// Categorical distribution over which cell contains the source.
class GridBelief {
public:
    // Validates non-negativity and that the probabilities sum to 1 (1e-9).
    GridBelief(GridGeometry geometry, std::vector<double> probs);

    // Normalizes arbitrary non-negative weights with positive total.
    static GridBelief from_weights(GridGeometry geometry, std::vector<double> weights);

    const GridGeometry& geometry() const noexcept { return geometry_; }
    std::span<const double> probs() const noexcept { return probs_; }
    double at(CellIndex c) const { return probs_[geometry_.flat(c)]; }
    std::size_t size() const noexcept { return probs_.size(); }

private:
    GridGeometry geometry_;
    std::vector<double> probs_;
};

// Per-cell likelihood p_t(g_i | z_t); non-negative with at least one positive weight.
class LikelihoodField {
public:
    LikelihoodField(GridGeometry geometry, std::vector<double> weights);

    const GridGeometry& geometry() const noexcept { return geometry_; }
    std::span<const double> weights() const noexcept { return weights_; }
    double at(CellIndex c) const { return weights_[geometry_.flat(c)]; }

private:
    GridGeometry geometry_;
    std::vector<double> weights_;
};

struct MeasurementContext {
    Vec2 usv_pos;
    Vec2 flow_dir{1.0, 0.0};           // unit wave direction
    std::optional<Vec2> last_hit_pos;  // most recent above-threshold reading
    double sigma2_hit = 1.0;           // rad^2
    double sigma2_miss = 4.0;          // rad^2
    int local_radius_cells = 5;

    void validate() const;
};

GridBelief uniform_belief(const GridGeometry& geometry);

// Expectation of the cell-centre coordinates under the belief.
Vec2 point_estimate(const GridBelief& belief);

LikelihoodField detection_likelihood(const MeasurementContext& ctx, const GridGeometry& geometry);
LikelihoodField miss_likelihood(const MeasurementContext& ctx, const GridGeometry& geometry);

// posterior_i = prior_i * like_i / sum_j prior_j * like_j.
// Throws DegenerateUpdateError when the normalizer vanishes.
GridBelief bayes_update(const GridBelief& belief, const LikelihoodField& like);

// CSV snapshot: i,j,x_m,y_m,probability (j outer, i inner).
void write_belief_csv(std::ostream& out, const GridBelief& belief);

}  // namespace plumetrack
