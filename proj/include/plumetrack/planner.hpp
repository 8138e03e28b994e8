#pragma once

#include <optional>
#include <vector>

#include "plumetrack/belief.hpp"
#include "plumetrack/geometry.hpp"
#include "plumetrack/kernel.hpp"

namespace plumetrack {

struct PlannerParams {
    int window_cells = 11;           // odd edge length of the candidate window
    double sigma2_hit = 1.0;
    double sigma2_miss = 4.0;
    double detection_ceiling = 1.0;  // kappa in (0, 1]
    double prob_clip = 1e-6;         // p_hit is clamped into [eps, 1 - eps]

    void validate() const;
    friend bool operator==(const PlannerParams&, const PlannerParams&) = default;
};

struct CandidateScore {
    CellIndex cell;
    double ig = 0.0;     // expected information gain, nats
    double p_hit = 0.0;  // predicted detection probability
};

// Absolute tolerance under which two information gains are considered tied.
inline constexpr double kInformationGainTie = 1e-12;

// Window around usv_cell clipped to the grid, minus usv_cell, row-major.
std::vector<CellIndex> candidate_waypoints(const GridGeometry& geometry, CellIndex usv_cell,
                                           const PlannerParams& params);

// Belief-weighted probability that a source sits upwind enough of `candidate`
// for a detection there, clamped into [eps, 1 - eps].
double predicted_hit_probability(const GridBelief& belief, CellIndex candidate, Vec2 flow_dir,
                                 const PlannerParams& params);

// Expected KL divergence between the predicted posterior and the belief,
// averaged over the binary outcome of a reading taken at `candidate`.
// ctx.usv_pos is ignored: kernels are evaluated at the candidate's centre.
CandidateScore expected_information_gain(const GridBelief& belief, CellIndex candidate,
                                         const MeasurementContext& ctx, const PlannerParams& params);

// KL(posterior || prior) of a Bayes update, natural log; 0 when the update
// is degenerate.
double update_divergence(const GridBelief& belief, const LikelihoodField& like);

// p_hit * KL(hit posterior) + (1 - p_hit) * KL(miss posterior) on explicit fields.
double information_gain(const GridBelief& belief, const LikelihoodField& hit, const LikelihoodField& miss,
                        double p_hit);

// Scores many candidates against one belief, sharing the hit-kernel table.
class InformationGainEvaluator {
public:
    InformationGainEvaluator(const GridBelief& belief, const MeasurementContext& ctx, const PlannerParams& params);

    double hit_probability(CellIndex candidate) const;
    CandidateScore score(CellIndex candidate) const;

private:
    double hit_kernel(int di, int dj) const {
        return hit_table_[static_cast<std::size_t>(dj + ny_ - 1) * (2 * nx_ - 1) + (di + nx_ - 1)];
    }
    double branch_kl(const CoveredBlock& block) const;

    const GridBelief& belief_;
    MeasurementContext ctx_;
    PlannerParams params_;
    int nx_;
    int ny_;
    std::vector<double> hit_table_;  // kernel by index offset (candidate - cell)
};

// Index of the winner among scores: max ig, ties within kInformationGainTie
// broken by distance to usv_cell, then row-major order.
std::size_t select_best(const std::vector<CandidateScore>& scores, CellIndex usv_cell, int nx);

// Argmax of expected information gain over the candidate window. When
// `trace` is non-null it receives every candidate's score in row-major order.
CellIndex select_waypoint(const GridBelief& belief, CellIndex usv_cell, const MeasurementContext& ctx,
                          const PlannerParams& params, std::vector<CandidateScore>* trace = nullptr);

}  // namespace plumetrack
