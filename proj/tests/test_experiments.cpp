#include <gtest/gtest.h>

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dunkl/experiments.hpp"

using namespace dunkl;

namespace {

Potential make(Family f, int m, std::vector<double> k)
{
    return Potential(RootSystem::catalog(f, m), Multiplicity(std::move(k)));
}

SimConfig small(std::size_t paths, double horizon)
{
    SimConfig c;
    c.n_paths = paths;
    c.horizon = horizon;
    return c;
}

void check_invariants(const ExperimentReport& r)
{
    EXPECT_LE(r.ci.low, r.estimate);
    EXPECT_LE(r.estimate, r.ci.high);
    EXPECT_FALSE(r.ci_method.empty());
    EXPECT_LE(r.n_failed, r.n_paths);
}

}  // namespace

// T0 of a Bessel process of dimension d < 2 from x is x^2 / (2 G) with
// G ~ Gamma(1 - d/2), so P(T0 <= t) = Q(1/2 - k, x^2 / (2 t)).
TEST(Hitting, MatchesExactBesselLaw)
{
    const double k = 0.25;
    const auto p = make(Family::RankOne, 1, {k});
    for (double t : {0.5, 4.0}) {
        auto cfg = small(2000, t);
        cfg.master_seed = 17;
        const auto r = hitting_probability(p, Vec{1.0}, cfg);
        check_invariants(r);
        const double exact = boost::math::gamma_q(0.5 - k, 1.0 / (2.0 * t));
        const double se = std::sqrt(exact * (1 - exact) / cfg.n_paths);
        EXPECT_NEAR(r.estimate, exact, 4 * se) << "t = " << t;
        EXPECT_TRUE(r.valid());
    }
}

TEST(Hitting, CurveIsNondecreasing)
{
    const auto r = hitting_probability(make(Family::A, 3, {0.3}), Vec{2, 1, 0}, small(300, 5));
    double last = 0;
    for (const auto& c : r.details["curve"]) {
        EXPECT_GE(c["estimate"].get<double>(), last);
        last = c["estimate"].get<double>();
    }
    EXPECT_EQ(last, r.estimate);
    EXPECT_TRUE(r.details["expect_hit"].get<bool>());
}

TEST(Hitting, NonHittingRegimeShrinksWithEpsilon)
{
    const auto p = make(Family::RankOne, 1, {0.75});
    double last = 1.0;
    for (double eps : {1e-2, 1e-4, 1e-6}) {
        auto cfg = small(500, 2);
        cfg.hit_epsilon = eps;
        const auto r = hitting_probability(p, Vec{1.0}, cfg);
        EXPECT_FALSE(r.details["expect_hit"].get<bool>());
        EXPECT_LE(r.estimate, last + 0.02);
        last = r.estimate;
    }
    EXPECT_LE(last, 0.02);
}

TEST(Dominance, RankOneHasNoViolations)
{
    const auto r = dominance_experiment(make(Family::RankOne, 1, {0.2}), 0, Vec{1.0}, small(50, 1));
    EXPECT_EQ(r.estimate, 0.0);
    EXPECT_EQ(r.pass, true);
}

TEST(Dominance, RejectsBadStart)
{
    EXPECT_THROW(dominance_experiment(make(Family::A, 3, {0.3}), 0, Vec{2, 1, 0}, small(5, 1), 0.5),
                 std::invalid_argument);
}

TEST(Occupation, StrongRepulsionIsZero)
{
    const auto r = boundary_occupation(make(Family::B, 2, {2.0, 2.5}), Vec{2, 1}, small(100, 1),
                                       {0.1, 0.03, 0.01});
    for (const auto& row : r.details["profile"])
        EXPECT_EQ(row["occupation"].get<double>(), 0.0);
    EXPECT_EQ(r.pass, true);
}

TEST(Occupation, RejectsZeroMultiplicity)
{
    EXPECT_THROW(boundary_occupation(make(Family::RankOne, 1, {0.0}), Vec{1.0}, small(5, 1), {0.1}),
                 std::invalid_argument);
}

TEST(Moments, RankOneSlope)
{
    auto cfg = small(3000, 1);
    const auto r = moment_check(make(Family::RankOne, 1, {0.25}), Vec{1.0}, cfg);
    check_invariants(r);
    EXPECT_EQ(r.details["target_slope"].get<double>(), 1.5);
    EXPECT_EQ(r.pass, true);
}

TEST(Race, ExploratoryAndSameOrbit)
{
    const auto r = hitting_race(make(Family::A, 3, {0.3}), Vec{1, 0, -1}, 0, 1, small(200, 20));
    EXPECT_FALSE(r.pass.has_value());
    EXPECT_TRUE(r.details["same_orbit"].get<bool>());
    const auto b = hitting_race(make(Family::B, 2, {0.4, 0.1}), Vec{2, 1}, 0, 1, small(50, 5));
    EXPECT_FALSE(b.details["same_orbit"].get<bool>());
    EXPECT_THROW(hitting_race(make(Family::A, 3, {0.6}), Vec{1, 0, -1}, 0, 1, small(5, 1)),
                 std::invalid_argument);
}

TEST(Report, JsonRoundTripAndFileName)
{
    auto cfg = small(50, 1);
    cfg.master_seed = 77;
    const auto r = hitting_probability(make(Family::RankOne, 1, {0.25}), Vec{1.0}, cfg);
    const auto back = report_from_json(to_json(r));
    EXPECT_EQ(to_json(back), to_json(r));
    EXPECT_EQ(report_file_name(r), "hitting_77.json");
    // pass is re-evaluable from the recorded numbers.
    EXPECT_EQ(*r.pass, r.estimate >= r.tolerance);
    EXPECT_FALSE(to_json(r).contains("runtime_seconds"));
    EXPECT_TRUE(to_json(r, true).contains("runtime_seconds"));
}

TEST(Report, IndependentOfThreadCount)
{
    const auto p = make(Family::A, 3, {0.3});
    std::string dumps[2];
    int i = 0;
    for (const char* threads : {"1", "3"}) {
        setenv("DUNKL_LAB_THREADS", threads, 1);
        dumps[i++] = to_json(hitting_probability(p, Vec{2, 1, 0}, small(64, 2))).dump();
    }
    unsetenv("DUNKL_LAB_THREADS");
    EXPECT_EQ(dumps[0], dumps[1]);
}
