#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "dunkl/sde.hpp"

using namespace dunkl;

namespace {

Potential make(Family f, int m, std::vector<double> k)
{
    return Potential(RootSystem::catalog(f, m), Multiplicity(std::move(k)));
}

}  // namespace

TEST(SimConfig, Validation)
{
    SimConfig c;
    EXPECT_NO_THROW(c.validate());
    c.dt = 0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = {};
    c.clip_fraction = 1.0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = {};
    c.hit_epsilon = 0.0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = {};
    EXPECT_DOUBLE_EQ(c.hit_epsilon_for(Vec{3, 4}), 6e-6);
}

TEST(Step, ZeroMultiplicityIsPureBrownian)
{
    const auto p = make(Family::A, 3, {0.0});
    BrownianStream s(0, 0);
    const Vec x{2, 1, 0}, dw{0.01, -0.02, 0.005};
    const auto out = step(p, x, dw, 1e-3, SimConfig{}, s);
    EXPECT_EQ(out.status, StepStatus::Ok);
    EXPECT_LT(max_abs_diff(out.state, Vec{2.01, 0.98, 0.005}), 1e-15);
}

TEST(Step, DeterministicDrift)
{
    const auto p = make(Family::RankOne, 1, {1.0});
    BrownianStream s(0, 0);
    const auto out = step(p, Vec{1.0}, Vec{0.0}, 0.01, SimConfig{}, s);
    EXPECT_EQ(out.status, StepStatus::Ok);
    EXPECT_NEAR(out.state[0], 1.01, 1e-15);
    EXPECT_EQ(out.substeps, 1u);
}

TEST(Step, DriftCapEngagesSubstepping)
{
    const auto p = make(Family::RankOne, 1, {1.0});
    BrownianStream s(0, 0);
    const auto out = step(p, Vec{1e-4}, Vec{0.0}, 0.01, SimConfig{}, s, 1e-9);
    EXPECT_EQ(out.status, StepStatus::Ok);
    EXPECT_GT(out.substeps, 1u);
    EXPECT_NEAR(out.elapsed, 0.01, 1e-15);
    // The exact flow from x0 gives sqrt(x0^2 + 2 t).
    EXPECT_NEAR(out.state[0], std::sqrt(1e-8 + 0.02), 0.05 * std::sqrt(0.02));
}

TEST(Step, FailureWhenCapCannotBeMet)
{
    const auto p = make(Family::RankOne, 1, {1.0});
    SimConfig cfg;
    cfg.substep_max = 2;
    BrownianStream s(0, 0);
    const auto out = step(p, Vec{1e-4}, Vec{0.0}, 0.01, cfg, s, 1e-9);
    EXPECT_EQ(out.status, StepStatus::Failure);
}

TEST(Step, RejectsBoundaryState)
{
    const auto p = make(Family::RankOne, 1, {1.0});
    BrownianStream s(0, 0);
    EXPECT_THROW(step(p, Vec{0.0}, Vec{0.1}, 0.01, SimConfig{}, s), std::domain_error);
}

TEST(SimulatePath, Deterministic)
{
    const auto p = make(Family::B, 2, {0.3, 0.6});
    SimConfig cfg;
    cfg.record_stride = 3;
    BrownianStream a(9, 4), b(9, 4);
    const auto x = simulate_path(Vec{1.0, 0.5}, p, cfg, a);
    const auto y = simulate_path(Vec{1.0, 0.5}, p, cfg, b);
    EXPECT_EQ(x.times, y.times);
    EXPECT_EQ(x.states, y.states);
    EXPECT_EQ(x.row_margins, y.row_margins);
}

TEST(SimulatePath, ZeroMultiplicityMatchesRawIncrements)
{
    const auto p = make(Family::A, 3, {0.0});
    SimConfig cfg;
    cfg.horizon = 0.05;
    cfg.record_stride = 1;
    const Vec x0{10, 0, -10};
    BrownianStream s(1, 2), raw(1, 2);
    const auto rec = simulate_path(x0, p, cfg, s);
    ASSERT_FALSE(rec.hit);
    Vec x = x0;
    for (std::size_t r = 1; r < rec.size(); ++r) {
        for (auto& v : x)
            v += std::sqrt(cfg.dt) * raw.next_normal();
        EXPECT_LT(max_abs_diff(rec.state(r), x), 1e-12);
    }
}

TEST(SimulatePath, RecordingGridAndInvariants)
{
    const auto p = make(Family::A, 4, {0.7});
    SimConfig cfg;
    cfg.horizon = 0.5;
    cfg.record_stride = 10;
    BrownianStream s(2, 0);
    const auto rec = simulate_path(Vec{3, 2, 1, 0}, p, cfg, s);
    ASSERT_FALSE(rec.hit);
    ASSERT_EQ(rec.size(), 51u);
    EXPECT_EQ(rec.times.front(), 0.0);
    EXPECT_NEAR(rec.final_time(), 0.5, 1e-12);
    const auto& rs = p.system();
    for (std::size_t r = 0; r < rec.size(); ++r) {
        const auto st = rec.state(r);
        double mn = INFINITY;
        for (std::size_t j = 0; j < rs.rank(); ++j)
            mn = std::min(mn, dot(rs.simple(j), st));
        EXPECT_EQ(rec.row_margins[r], mn);
        EXPECT_GE(mn, rec.min_margin);
    }
}

TEST(SimulatePath, HitRecordsRootAndTime)
{
    const auto p = make(Family::A, 3, {0.1});
    SimConfig cfg;
    cfg.horizon = 20;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < 50; ++i) {
        BrownianStream s(0, i);
        const auto rec = simulate_path(Vec{1, 0.9, 0}, p, cfg, s);
        if (!rec.hit)
            continue;
        ++hits;
        ASSERT_TRUE(rec.hit_root.has_value());
        EXPECT_LT(*rec.hit_root, 2u);
        EXPECT_LE(*rec.hit_time, cfg.horizon);
        EXPECT_EQ(rec.final_time(), *rec.hit_time);
        const double margin = dot(p.system().simple(*rec.hit_root), rec.state(rec.size() - 1));
        EXPECT_LE(margin, cfg.hit_epsilon_for(Vec{1, 0.9, 0}));
        EXPECT_GE(margin, -1e-12);
    }
    EXPECT_GT(hits, 40u);
}

TEST(SimulatePath, StrongRepulsionKeepsAwayFromWalls)
{
    const auto p = make(Family::RankOne, 1, {5.0});
    SimConfig cfg;
    cfg.horizon = 1;
    for (std::size_t i = 0; i < 20; ++i) {
        BrownianStream s(0, i);
        const auto rec = simulate_path(Vec{1.0}, p, cfg, s);
        EXPECT_FALSE(rec.hit);
        EXPECT_GT(rec.min_margin, 0.2);
    }
}

TEST(SimulatePath, BoundaryStartEntersChamber)
{
    const auto p = make(Family::A, 3, {1.5});
    SimConfig cfg;
    cfg.horizon = 0.1;
    for (std::size_t i = 0; i < 20; ++i) {
        BrownianStream s(0, i);
        const auto rec = simulate_path(Vec{1, 1, 0}, p, cfg, s);
        EXPECT_FALSE(rec.boundary_start_failure);
        EXPECT_EQ(rec.times.front(), 0.0);
        EXPECT_EQ(rec.state(0)[0], 1.0);
        EXPECT_GT(rec.row_margins.back(), 0.0);
    }
}

TEST(SimulatePath, RejectsExteriorStart)
{
    const auto p = make(Family::A, 3, {0.5});
    BrownianStream s(0, 0);
    EXPECT_THROW(simulate_path(Vec{0, 1, 2}, p, SimConfig{}, s), std::invalid_argument);
}

// Dimension 2 is planar Brownian motion seen from the origin. The chance of
// entering the disc of radius eps before t from distance 1 is about
// (ln(2t) - Euler gamma) / (2 ln(1/eps)), 0.088 for t = 10, eps = 1e-6.
TEST(Bessel, CriticalDimensionLogarithmicHitting)
{
    SimConfig cfg;
    cfg.horizon = 10;
    cfg.hit_epsilon = 1e-6;
    cfg.record_stride = 1000000;
    std::size_t hits = 0;
    const std::size_t n = 400;
    for (std::size_t i = 0; i < n; ++i) {
        BrownianStream s(0, i);
        hits += simulate_bessel(1.0, 0.5, 1.0, cfg, s).hit;
    }
    EXPECT_GT(hits, n * 4 / 100);
    EXPECT_LT(hits, n * 16 / 100);
    // Shrinking eps by six decades roughly halves the rate.
    cfg.hit_epsilon = 1e-12;
    std::size_t deep = 0;
    for (std::size_t i = 0; i < n; ++i) {
        BrownianStream s(0, i);
        deep += simulate_bessel(1.0, 0.5, 1.0, cfg, s).hit;
    }
    EXPECT_LT(deep, hits);
}

TEST(Bessel, DimensionOneHitsEventually)
{
    SimConfig cfg;
    cfg.horizon = 100;
    cfg.record_stride = 1000000;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < 200; ++i) {
        BrownianStream s(0, i);
        hits += simulate_bessel(1.0, 0.0, 1.0, cfg, s).hit;
    }
    // P(T0 <= 100) = 2 Phi(-0.1) = 0.92.
    EXPECT_GT(hits, 170u);
}

TEST(Bessel, DiffusiveScaling)
{
    SimConfig cfg;
    cfg.horizon = 400;
    cfg.dt = 4e-3;
    cfg.record_stride = 1000000;
    auto median_time = [&](double y0) {
        std::vector<double> t;
        for (std::size_t i = 0; i < 400; ++i) {
            BrownianStream s(1, i);
            const auto rec = simulate_bessel(y0, 0.25, 1.0, cfg, s);
            t.push_back(rec.hit ? *rec.hit_time : INFINITY);
        }
        std::nth_element(t.begin(), t.begin() + 200, t.end());
        return t[200];
    };
    const double ratio = median_time(2.0) / median_time(1.0);
    EXPECT_GT(ratio, 3.0);
    EXPECT_LT(ratio, 5.3);
}

TEST(Coupled, RankOnePathsCoincide)
{
    const auto p = make(Family::RankOne, 1, {0.3});
    SimConfig cfg;
    cfg.record_stride = 1;
    BrownianStream s(0, 3);
    const auto cp = simulate_coupled_comparison(Vec{1.0}, 0, 1.0, p, cfg, s);
    ASSERT_EQ(cp.x.size(), cp.y.size());
    for (std::size_t r = 0; r < cp.x.size(); ++r)
        EXPECT_NEAR(cp.x.state(r)[0], cp.y.state(r)[0], 1e-10);
}

TEST(Coupled, Dominance)
{
    const auto p = make(Family::A, 3, {0.3});
    SimConfig cfg;
    cfg.record_stride = 1;
    const Vec x0{2, 1, 0};
    const double tol = 5 * std::sqrt(cfg.dt) * std::sqrt(2.0);
    std::size_t pairs = 0, bad = 0;
    for (std::size_t i = 0; i < 30; ++i) {
        BrownianStream s(0, i);
        const auto cp = simulate_coupled_comparison(x0, 0, 1.0, p, cfg, s);
        const std::size_t n = std::min(cp.x.size(), cp.y.size());
        for (std::size_t r = 0; r < n; ++r) {
            if (cp.x.times[r] != cp.y.times[r])
                break;
            ++pairs;
            bad += cp.y.state(r)[0] < dot(cp.alpha0, cp.x.state(r)) - tol;
        }
        if (cp.y.hit) {
            ASSERT_TRUE(cp.x.hit);
            EXPECT_LE(*cp.x.hit_time, *cp.y.hit_time + cfg.dt);
        }
    }
    EXPECT_GT(pairs, 0u);
    EXPECT_LE(bad, pairs / 1000);
}

TEST(Coupled, RequiresDominatingStart)
{
    const auto p = make(Family::A, 3, {0.3});
    BrownianStream s(0, 0);
    EXPECT_THROW(simulate_coupled_comparison(Vec{2, 1, 0}, 0, 0.5, p, SimConfig{}, s),
                 std::invalid_argument);
}
