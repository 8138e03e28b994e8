#include "plumetrack/planner.hpp"

#include <algorithm>
#include <cmath>

#include "plumetrack/errors.hpp"
#include "plumetrack/kernel.hpp"

namespace plumetrack {

void PlannerParams::validate() const {
    if (window_cells < 3 || window_cells % 2 == 0) throw ValidationError("window_cells must be odd and >= 3");
    if (!(sigma2_hit > 0.0) || !(sigma2_miss > 0.0)) throw ValidationError("kernel variances must be positive");
    if (!(detection_ceiling > 0.0 && detection_ceiling <= 1.0))
        throw ValidationError("detection_ceiling must lie in (0, 1]");
    if (!(prob_clip > 0.0 && prob_clip < 0.5)) throw ValidationError("prob_clip must lie in (0, 0.5)");
}

std::vector<CellIndex> candidate_waypoints(const GridGeometry& geometry, CellIndex usv_cell,
                                           const PlannerParams& params) {
    params.validate();
    if (!geometry.in_grid(usv_cell)) throw OutOfBoundsError("vehicle cell lies outside the grid");
    const int half = params.window_cells / 2;
    std::vector<CellIndex> out;
    const int j0 = std::max(0, usv_cell.j - half), j1 = std::min(geometry.ny() - 1, usv_cell.j + half);
    const int i0 = std::max(0, usv_cell.i - half), i1 = std::min(geometry.nx() - 1, usv_cell.i + half);
    for (int j = j0; j <= j1; ++j) {
        for (int i = i0; i <= i1; ++i) {
            if (CellIndex{i, j} != usv_cell) out.push_back({i, j});
        }
    }
    return out;
}

InformationGainEvaluator::InformationGainEvaluator(const GridBelief& belief, const MeasurementContext& ctx,
                                                   const PlannerParams& params)
    : belief_(belief), ctx_(ctx), params_(params), nx_(belief.geometry().nx()), ny_(belief.geometry().ny()) {
    params_.validate();
    ctx_.validate();
    const double h = belief.geometry().cell_size();
    hit_table_.resize(static_cast<std::size_t>(2 * nx_ - 1) * (2 * ny_ - 1));
    for (int dj = -(ny_ - 1); dj <= ny_ - 1; ++dj) {
        for (int di = -(nx_ - 1); di <= nx_ - 1; ++di) {
            double w = 1.0;
            if (di != 0 || dj != 0) {
                const double theta = angle_between(Vec2{di * h, dj * h}, ctx_.flow_dir);
                w = angular_gaussian(theta, params_.sigma2_hit);
            }
            hit_table_[static_cast<std::size_t>(dj + ny_ - 1) * (2 * nx_ - 1) + (di + nx_ - 1)] =
                params_.detection_ceiling * w;
        }
    }
}

double InformationGainEvaluator::hit_probability(CellIndex candidate) const {
    const auto probs = belief_.probs();
    double p = 0.0;
    std::size_t k = 0;
    for (int j = 0; j < ny_; ++j) {
        for (int i = 0; i < nx_; ++i, ++k) {
            if (probs[k] != 0.0) p += probs[k] * hit_kernel(candidate.i - i, candidate.j - j);
        }
    }
    return std::clamp(p, params_.prob_clip, 1.0 - params_.prob_clip);
}

// KL(posterior || prior) for posterior ∝ prior * w, using
// ln(posterior_i / prior_i) = ln w_i - ln Z on cells with prior_i > 0.
double InformationGainEvaluator::branch_kl(const CoveredBlock& block) const {
    const auto probs = belief_.probs();
    double z = 0.0;
    double s = 0.0;
    std::size_t k = 0;
    for (int j = 0; j < ny_; ++j) {
        for (int i = 0; i < nx_; ++i, ++k) {
            const double p = probs[k];
            if (p == 0.0) continue;
            const std::size_t slot = block.slot(i, j);
            const double pw = p * block.weights[slot];
            z += pw;
            s += pw * block.log_weights[slot];
        }
    }
    if (!(z > 0.0) || !std::isfinite(z)) return 0.0;
    return s / z - std::log(z);
}

CandidateScore InformationGainEvaluator::score(CellIndex candidate) const {
    const GridGeometry& g = belief_.geometry();
    if (!g.in_grid(candidate)) throw OutOfBoundsError("candidate lies outside the grid");
    const Vec2 at = g.centre(candidate);

    CandidateScore out{candidate, 0.0, hit_probability(candidate)};
    const CoveredBlock hit = detection_block(g, at, ctx_.flow_dir, params_.sigma2_hit, ctx_.local_radius_cells);
    const double kl_hit = branch_kl(hit);
    double kl_miss = 0.0;
    if (auto miss = miss_block(g, at, ctx_.last_hit_pos, params_.sigma2_miss, ctx_.local_radius_cells)) {
        kl_miss = branch_kl(*miss);
    }
    out.ig = out.p_hit * kl_hit + (1.0 - out.p_hit) * kl_miss;
    return out;
}

double predicted_hit_probability(const GridBelief& belief, CellIndex candidate, Vec2 flow_dir,
                                 const PlannerParams& params) {
    MeasurementContext ctx;
    ctx.flow_dir = flow_dir;
    ctx.sigma2_hit = params.sigma2_hit;
    ctx.sigma2_miss = params.sigma2_miss;
    return InformationGainEvaluator(belief, ctx, params).hit_probability(candidate);
}

CandidateScore expected_information_gain(const GridBelief& belief, CellIndex candidate,
                                         const MeasurementContext& ctx, const PlannerParams& params) {
    return InformationGainEvaluator(belief, ctx, params).score(candidate);
}

double update_divergence(const GridBelief& belief, const LikelihoodField& like) {
    try {
        const GridBelief post = bayes_update(belief, like);
        const auto q = post.probs();
        const auto p = belief.probs();
        double kl = 0.0;
        for (std::size_t k = 0; k < q.size(); ++k) {
            if (q[k] > 0.0 && p[k] > 0.0) kl += q[k] * std::log(q[k] / p[k]);
        }
        return kl;
    } catch (const DegenerateUpdateError&) {
        return 0.0;
    }
}

double information_gain(const GridBelief& belief, const LikelihoodField& hit, const LikelihoodField& miss,
                        double p_hit) {
    return p_hit * update_divergence(belief, hit) + (1.0 - p_hit) * update_divergence(belief, miss);
}

std::size_t select_best(const std::vector<CandidateScore>& scores, CellIndex usv_cell, int nx) {
    if (scores.empty()) throw ValidationError("no candidate waypoints to choose from");
    double best_ig = scores.front().ig;
    for (const auto& s : scores) best_ig = std::max(best_ig, s.ig);

    auto dist2 = [&](CellIndex c) {
        const long di = c.i - usv_cell.i, dj = c.j - usv_cell.j;
        return di * di + dj * dj;
    };
    auto row_major = [&](CellIndex c) { return static_cast<long>(c.j) * nx + c.i; };

    std::size_t best = scores.size();
    for (std::size_t k = 0; k < scores.size(); ++k) {
        if (scores[k].ig < best_ig - kInformationGainTie) continue;
        if (best == scores.size()) {
            best = k;
            continue;
        }
        const CellIndex a = scores[k].cell, b = scores[best].cell;
        if (dist2(a) < dist2(b) || (dist2(a) == dist2(b) && row_major(a) < row_major(b))) best = k;
    }
    return best;
}

CellIndex select_waypoint(const GridBelief& belief, CellIndex usv_cell, const MeasurementContext& ctx,
                          const PlannerParams& params, std::vector<CandidateScore>* trace) {
    const auto candidates = candidate_waypoints(belief.geometry(), usv_cell, params);
    if (candidates.empty()) throw ValidationError("no candidate waypoints to choose from");
    const InformationGainEvaluator evaluator(belief, ctx, params);
    std::vector<CandidateScore> scores;
    scores.reserve(candidates.size());
    for (CellIndex c : candidates) scores.push_back(evaluator.score(c));
    const CellIndex chosen = scores[select_best(scores, usv_cell, belief.geometry().nx())].cell;
    if (trace) *trace = std::move(scores);
    return chosen;
}

}  // namespace plumetrack
