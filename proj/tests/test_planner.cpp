#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "plumetrack/errors.hpp"
#include "plumetrack/planner.hpp"

using namespace plumetrack;

namespace {

constexpr double kPi = 3.14159265358979323846;

GridBelief point_mass(const GridGeometry& g, CellIndex c) {
    std::vector<double> p(g.cell_count(), 0.0);
    p[g.flat(c)] = 1.0;
    return GridBelief(g, p);
}

bool contains(const std::vector<CellIndex>& cells, CellIndex c) {
    for (const auto& x : cells)
        if (x == c) return true;
    return false;
}

}  // namespace

TEST_CASE("candidate_waypoints") {
    const GridGeometry g(100, 50, 5.0);
    const PlannerParams params;
    const auto interior = candidate_waypoints(g, {40, 20}, params);
    CHECK(interior.size() == 120);
    CHECK_FALSE(contains(interior, {40, 20}));
    CHECK(interior.front() == CellIndex{35, 15});
    CHECK(interior.back() == CellIndex{45, 25});
    for (std::size_t k = 1; k < interior.size(); ++k)
        CHECK(g.flat(interior[k - 1]) < g.flat(interior[k]));

    CHECK(candidate_waypoints(g, {0, 0}, params).size() == 35);

    PlannerParams small;
    small.window_cells = 3;
    CHECK(candidate_waypoints(g, {40, 20}, small).size() == 8);

    PlannerParams even;
    even.window_cells = 4;
    CHECK_THROWS_AS(candidate_waypoints(g, {40, 20}, even), ValidationError);
    CHECK_THROWS_AS(candidate_waypoints(g, {100, 0}, params), OutOfBoundsError);
}

TEST_CASE("predicted_hit_probability examples") {
    const GridGeometry g(9, 9, 5.0);
    const PlannerParams params;
    const Vec2 wind{1.0, 0.0};
    const CellIndex cand{4, 4};

    CHECK(predicted_hit_probability(point_mass(g, {3, 4}), cand, wind, params) == doctest::Approx(1.0 - 1e-6).epsilon(1e-15));
    CHECK(predicted_hit_probability(point_mass(g, {5, 4}), cand, wind, params) ==
          doctest::Approx(std::exp(-kPi * kPi / 2.0)).epsilon(1e-12));

    std::vector<double> split(g.cell_count(), 0.0);
    split[g.flat({3, 4})] = 0.5;
    split[g.flat({4, 3})] = 0.5;
    const double p = predicted_hit_probability(GridBelief(g, split), cand, wind, params);
    CHECK(p == doctest::Approx(0.5 + 0.5 * std::exp(-kPi * kPi / 8.0)).epsilon(1e-12));
    CHECK(p == doctest::Approx(0.64560646661).epsilon(1e-9));

    PlannerParams capped;
    capped.detection_ceiling = 0.5;
    CHECK(predicted_hit_probability(point_mass(g, {0, 4}), cand, wind, capped) == doctest::Approx(0.5));
    CHECK(predicted_hit_probability(point_mass(g, {8, 4}), {0, 4}, wind, params) >= 1e-6);
}

TEST_CASE("information gain examples") {
    const GridGeometry g(9, 9, 5.0);
    const PlannerParams params;
    MeasurementContext ctx;
    ctx.last_hit_pos = g.centre({8, 8});

    SUBCASE("point mass leaves nothing to learn") {
        const GridBelief b = point_mass(g, {2, 6});
        for (const auto& c : candidate_waypoints(g, {4, 4}, params))
            CHECK(std::abs(expected_information_gain(b, c, ctx, params).ig) <= 1e-12);
    }
    SUBCASE("constant kernels give zero gain") {
        MeasurementContext flat;
        flat.local_radius_cells = 0;
        std::mt19937_64 rng(1);
        const GridBelief b = oracle::random_belief(g, rng);
        for (const auto& c : candidate_waypoints(g, {4, 4}, params))
            CHECK(std::abs(expected_information_gain(b, c, flat, params).ig) <= 1e-12);
    }
    SUBCASE("two-cell hand evaluation") {
        const GridGeometry g2(2, 1, 1.0);
        const GridBelief b(g2, {0.5, 0.5});
        const double ig = information_gain(b, LikelihoodField(g2, {1.0, 0.1}), LikelihoodField(g2, {1.0, 1.0}), 0.5);
        const double hand = 0.5 * ((10.0 / 11.0) * std::log(20.0 / 11.0) + (1.0 / 11.0) * std::log(2.0 / 11.0));
        CHECK(ig == doctest::Approx(hand).epsilon(1e-12));
        CHECK(ig == doctest::Approx(0.19425554160535358).epsilon(1e-12));

        const double scaled =
            information_gain(b, LikelihoodField(g2, {7.0, 0.7}), LikelihoodField(g2, {0.2, 0.2}), 0.5);
        CHECK(scaled == doctest::Approx(ig).epsilon(1e-12));
    }
    SUBCASE("degenerate branch contributes nothing") {
        const GridGeometry g2(2, 1, 1.0);
        const GridBelief b(g2, {1.0, 0.0});
        CHECK(update_divergence(b, LikelihoodField(g2, {0.0, 1.0})) == 0.0);
    }
}

TEST_CASE("evaluator agrees with full-field evaluation and the oracle") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    for (int trial = 0; trial < 25; ++trial) {
        const GridGeometry g(6 + trial % 7, 4 + trial % 5, 5.0);
        const GridBelief b = oracle::random_belief(g, rng, trial % 2 ? 0.4 : 0.0);
        const double a = ang(rng);
        MeasurementContext ctx;
        ctx.flow_dir = {std::cos(a), std::sin(a)};
        ctx.local_radius_cells = 1 + trial % 4;
        if (trial % 4) ctx.last_hit_pos = g.centre({static_cast<int>(rng() % g.nx()), static_cast<int>(rng() % g.ny())});
        const oracle::KernelInputs in{ctx.flow_dir, ctx.last_hit_pos, ctx.local_radius_cells};
        const PlannerParams params;

        for (std::size_t k = 0; k < g.cell_count(); ++k) {
            const CellIndex c = g.unflat(k);
            const CandidateScore fast = expected_information_gain(b, c, ctx, params);
            MeasurementContext at = ctx;
            at.usv_pos = g.centre(c);
            const double full = information_gain(b, detection_likelihood(at, g), miss_likelihood(at, g), fast.p_hit);
            const oracle::Score ref = oracle::score(b, c, in, params);
            REQUIRE(fast.ig == doctest::Approx(full).epsilon(1e-9));
            REQUIRE(fast.ig == doctest::Approx(ref.ig).epsilon(1e-9));
            REQUIRE(fast.p_hit == doctest::Approx(ref.p_hit).epsilon(1e-12));
            REQUIRE(fast.ig >= -1e-12);
        }
    }
}

TEST_CASE("select_waypoint matches exhaustive selection on small grids") {
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    std::uniform_int_distribution<int> side(2, 6);
    for (int trial = 0; trial < 200; ++trial) {
        const GridGeometry g(side(rng), side(rng), 5.0);
        const GridBelief b = oracle::random_belief(g, rng, trial % 3 ? 0.0 : 0.5);
        const CellIndex usv{static_cast<int>(rng() % g.nx()), static_cast<int>(rng() % g.ny())};
        const double a = ang(rng);
        MeasurementContext ctx;
        ctx.usv_pos = g.centre(usv);
        ctx.flow_dir = {std::cos(a), std::sin(a)};
        ctx.local_radius_cells = 1 + static_cast<int>(rng() % 3);
        if (trial % 2) ctx.last_hit_pos = g.centre({static_cast<int>(rng() % g.nx()), static_cast<int>(rng() % g.ny())});
        PlannerParams params;
        params.window_cells = trial % 2 ? 3 : 5;

        const auto ref = oracle::score_window(b, usv, {ctx.flow_dir, ctx.last_hit_pos, ctx.local_radius_cells}, params);
        std::vector<CandidateScore> trace;
        const CellIndex got = select_waypoint(b, usv, ctx, params, &trace);
        REQUIRE(trace.size() == ref.size());
        CHECK(got == oracle::select(ref, usv, g.nx()));
        CHECK(select_waypoint(b, usv, ctx, params) == got);
    }
}

TEST_CASE("all-zero gains resolve to the nearest row-major candidate") {
    const GridGeometry g(11, 11, 5.0);
    MeasurementContext ctx;
    ctx.usv_pos = g.centre({5, 5});
    const CellIndex chosen = select_waypoint(point_mass(g, {1, 9}), {5, 5}, ctx, PlannerParams{});
    CHECK(chosen == CellIndex{5, 4});
}

TEST_CASE("belief concentrated upwind-left draws the vehicle into that quadrant") {
    const GridGeometry g(31, 31, 5.0);
    const CellIndex usv{15, 15};
    std::vector<double> w(g.cell_count());
    for (std::size_t k = 0; k < w.size(); ++k) {
        const CellIndex c = g.unflat(k);
        const double di = c.i - (usv.i - 4), dj = c.j - (usv.j + 4);
        w[k] = std::exp(-(di * di + dj * dj) / 2.0);
    }
    const GridBelief b = GridBelief::from_weights(g, w);
    MeasurementContext ctx;
    ctx.usv_pos = g.centre(usv);
    ctx.flow_dir = {1.0, 0.0};
    ctx.last_hit_pos = g.centre(usv) + Vec2{-5.0, 5.0};
    const PlannerParams params;

    const CellIndex chosen = select_waypoint(b, usv, ctx, params);
    MESSAGE("selected offset " << chosen.i - usv.i << "," << chosen.j - usv.j);
    CHECK(chosen.i < usv.i);
    CHECK(chosen.j > usv.j);

    const auto ref = oracle::score_window(b, usv, {ctx.flow_dir, ctx.last_hit_pos, ctx.local_radius_cells}, params);
    CHECK(ref.size() == 120);
    CHECK(chosen == oracle::select(ref, usv, g.nx()));
}

TEST_CASE("corner selection is drawn from the clipped window") {
    const GridGeometry g(20, 20, 5.0);
    std::mt19937_64 rng(6);
    const GridBelief b = oracle::random_belief(g, rng);
    MeasurementContext ctx;
    ctx.usv_pos = g.centre({0, 0});
    ctx.flow_dir = {std::sqrt(0.5), std::sqrt(0.5)};
    std::vector<CandidateScore> trace;
    const CellIndex chosen = select_waypoint(b, {0, 0}, ctx, PlannerParams{}, &trace);
    const auto cands = candidate_waypoints(g, {0, 0}, PlannerParams{});
    CHECK(trace.size() == 35);
    CHECK(contains(cands, chosen));
}

TEST_CASE("single-cell grid has no candidates") {
    const GridGeometry g(1, 1, 5.0);
    MeasurementContext ctx;
    CHECK(candidate_waypoints(g, {0, 0}, PlannerParams{}).empty());
    CHECK_THROWS_AS(select_waypoint(uniform_belief(g), {0, 0}, ctx, PlannerParams{}), ValidationError);
}
