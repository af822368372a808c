#include <gtest/gtest.h>

#include <cmath>

#include "dunkl/models.hpp"
#include "dunkl/validation.hpp"

using namespace dunkl;

TEST(LaguerreParams, Mapping)
{
    const auto a = LaguerreParams::make(3, 2.0, 3.0);
    EXPECT_DOUBLE_EQ(a.k0, 0.5);
    EXPECT_DOUBLE_EQ(a.k1, 1.0);
    const auto b = LaguerreParams::make(3, 1.0, 4.0);
    EXPECT_DOUBLE_EQ(b.k0, 0.5);
    EXPECT_DOUBLE_EQ(b.k1, 0.5);
    const auto c = LaguerreParams::make(3, 2.0, 2.5);
    EXPECT_DOUBLE_EQ(c.k0, 0.0);
    EXPECT_FALSE(c.strong_regime());
    EXPECT_TRUE(LaguerreParams::make(2, 2.0, 3.0).strong_regime());
    for (double beta : {0.5, 1.0, 2.0, 4.0})
        for (double delta : {0.5, 1.5, 3.0, 7.0}) {
            const auto p = LaguerreParams::make(2, beta, delta);
            EXPECT_EQ(p.strong_regime(), delta > 1.0 + 1.0 / beta);
        }
    EXPECT_THROW(LaguerreParams::make(2, 0.0, 3.0), std::invalid_argument);
}

TEST(TypeADrift, Examples)
{
    EXPECT_EQ(type_a_drift(Vec{1, 0}, 1.0), (Vec{1, -1}));
    EXPECT_EQ(type_a_drift(Vec{2, 1, 0}, 1.0), (Vec{1.5, 0, -1.5}));
    const Vec d = type_a_drift(Vec{3.1, 0.4, -0.2, -5}, 0.7);
    EXPECT_NEAR(d[0] + d[1] + d[2] + d[3], 0.0, 1e-15);
    EXPECT_THROW(type_a_drift(Vec{1, 1, 0}, 1.0), std::domain_error);
}

TEST(LaguerreDrift, Examples)
{
    const auto one = laguerre_drift(Vec{4.0}, LaguerreParams::make(1, 2.0, 3.0));
    EXPECT_DOUBLE_EQ(one.drift[0], 6.0);
    EXPECT_DOUBLE_EQ(one.diffusion[0], 4.0);
    const auto two = laguerre_drift(Vec{3, 1}, LaguerreParams::make(2, 2.0, 2.0));
    EXPECT_EQ(two.drift, (Vec{8, 0}));
    const auto p = LaguerreParams::make(4, 1.5, 5.0);
    const auto c = laguerre_drift(Vec{9, 4, 2, 0.5}, p);
    EXPECT_NEAR(c.drift[0] + c.drift[1] + c.drift[2] + c.drift[3], 1.5 * 5.0 * 4, 1e-12);
    EXPECT_THROW(laguerre_drift(Vec{1, 1}, LaguerreParams::make(2, 2, 3)), std::domain_error);
    EXPECT_THROW(laguerre_drift(Vec{1, -1}, LaguerreParams::make(2, 2, 3)), std::domain_error);
}

TEST(SqrtMap, Examples)
{
    EXPECT_EQ(sqrt_map(Vec{4, 1}), (Vec{2, 1}));
    const Vec l{7.3, 2.2, 0.01};
    const Vec back = square_map(sqrt_map(l));
    for (std::size_t i = 0; i < l.size(); ++i)
        EXPECT_NEAR(back[i], l[i], 1e-15 * l[i]);
    const auto b3 = RootSystem::catalog(Family::B, 3);
    EXPECT_EQ(chamber_membership(b3, sqrt_map(l)).region, ChamberRegion::Interior);
    EXPECT_THROW(sqrt_map(Vec{-1}), std::domain_error);
    EXPECT_THROW(square_map(Vec{-1}), std::domain_error);
}

TEST(LaguerreToRadial, OrbitBinding)
{
    const auto params = LaguerreParams::make(3, 2.0, 3.5);
    const Potential p = laguerre_to_radial(params);
    const auto& rs = p.system();
    for (std::size_t i = 0; i < rs.size(); ++i)
        EXPECT_DOUBLE_EQ(p.multiplicity().of_root(rs, i),
                         norm2(rs.root(i)) < 1.5 ? params.k0 : params.k1);
    EXPECT_THROW(laguerre_to_radial(LaguerreParams::make(2, 2.0, 1.0)), std::invalid_argument);
}

TEST(DriftConsistency, GenericMatchesParticleForms)
{
    BrownianStream s(5, 0);
    for (int m = 2; m <= 4; ++m) {
        const Potential a(RootSystem::catalog(Family::A, m), Multiplicity({0.9}));
        const auto params = LaguerreParams::make(m, 2.0, m + 0.7);
        const Potential b = laguerre_to_radial(params);
        for (int n = 0; n < 100; ++n) {
            const Vec x = random_chamber_point(a.system(), s);
            EXPECT_LT(max_abs_diff(a.drift(x), type_a_drift(x, 0.9)), 1e-12);
            const Vec r = random_chamber_point(b.system(), s);
            EXPECT_LT(max_abs_diff(b.drift(r), radial_laguerre_drift(r, params)), 1e-12);
        }
    }
}

TEST(DriftConsistency, ItoTransformOfRadialDrift)
{
    // lambda = r^2 has drift 1 + 2 r_i b_i(r), which must equal the Laguerre drift.
    const auto params = LaguerreParams::make(3, 1.0, 4.2);
    const Vec r{2.0, 1.3, 0.4};
    const Vec b = radial_laguerre_drift(r, params);
    const auto lag = laguerre_drift(square_map(r), params);
    for (std::size_t i = 0; i < r.size(); ++i)
        EXPECT_NEAR(1.0 + 2.0 * r[i] * b[i], lag.drift[i], 1e-12);
}

TEST(BesselParams, Examples)
{
    EXPECT_EQ(bessel_params(0.25).dimension, 1.5);
    EXPECT_EQ(bessel_params(0.25).index, -0.25);
    EXPECT_EQ(bessel_params(0.5).dimension, 2.0);
    EXPECT_EQ(bessel_params(0.5).index, 0.0);
    EXPECT_EQ(bessel_params(0.0).dimension, 1.0);
    EXPECT_THROW(bessel_params(-0.1), std::invalid_argument);
}

TEST(LaguerrePath, StaysOrderedAndPositive)
{
    const auto params = LaguerreParams::make(3, 2.0, 4.0);
    SimConfig cfg;
    cfg.record_stride = 1;
    for (std::size_t i = 0; i < 10; ++i) {
        BrownianStream s(0, i);
        const auto rec = simulate_laguerre(Vec{5, 3, 1}, params, cfg, s);
        EXPECT_FALSE(rec.failed());
        for (std::size_t row = 0; row < rec.size(); ++row) {
            const auto l = rec.state(row);
            EXPECT_GT(l[2], 0.0);
            EXPECT_GT(l[0], l[1]);
            EXPECT_GT(l[1], l[2]);
        }
    }
}

TEST(CenterOfMass, TypeAIsMartingale)
{
    const Potential p(RootSystem::catalog(Family::A, 3), Multiplicity({1.0}));
    SimConfig cfg;
    cfg.record_stride = 1000000;
    std::vector<double> d;
    for (std::size_t i = 0; i < 1000; ++i) {
        BrownianStream s(0, i);
        const auto rec = simulate_path(Vec{2, 1, 0}, p, cfg, s);
        const auto x = rec.state(rec.size() - 1);
        d.push_back(x[0] + x[1] + x[2] - 3.0);
    }
    double mean = 0, sq = 0;
    for (double v : d)
        mean += v / d.size();
    for (double v : d)
        sq += (v - mean) * (v - mean) / (d.size() - 1);
    EXPECT_LE(std::abs(mean), 3 * std::sqrt(sq / d.size()));
}
