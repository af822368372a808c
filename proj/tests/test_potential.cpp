#include <gtest/gtest.h>

#include <cmath>

#include "dunkl/potential.hpp"
#include "dunkl/validation.hpp"

using namespace dunkl;

namespace {

Potential make(Family f, int m, std::vector<double> k)
{
    return Potential(RootSystem::catalog(f, m), Multiplicity(std::move(k)));
}

TestFunction norm_squared()
{
    return {[](std::span<const double> x) { return norm2(x); },
            [](std::span<const double> x) { return scaled(x, 2.0); },
            [](std::span<const double> x) { return 2.0 * static_cast<double>(x.size()); }};
}

}  // namespace

TEST(Phi, Examples)
{
    EXPECT_DOUBLE_EQ(make(Family::RankOne, 1, {1.0}).phi(Vec{1.0}), 0.0);
    EXPECT_NEAR(make(Family::RankOne, 1, {2.0}).phi(Vec{std::exp(1.0)}), -2.0, 1e-15);
    EXPECT_NEAR(make(Family::A, 3, {1.0}).phi(Vec{2, 1, 0}), -std::log(2.0), 1e-15);
}

TEST(Phi, DomainErrors)
{
    const auto p = make(Family::A, 3, {1.0});
    EXPECT_THROW(p.phi(Vec{1, 1, 0}), std::domain_error);
    EXPECT_THROW(p.drift(Vec{0, 1, 2}), std::domain_error);
    EXPECT_THROW(p.apply_generator(norm_squared(), Vec{1, 1, 0}), std::domain_error);
    Vec out(3);
    EXPECT_FALSE(p.drift_into(Vec{1, 1, 0}, out));
}

TEST(Drift, Examples)
{
    const auto r1 = make(Family::RankOne, 1, {0.3});
    EXPECT_DOUBLE_EQ(r1.drift(Vec{2.0})[0], 0.15);
    EXPECT_EQ(make(Family::A, 2, {1.0}).drift(Vec{1, 0}), (Vec{1, -1}));
    EXPECT_EQ(make(Family::B, 2, {0.0, 0.0}).drift(Vec{2, 1}), (Vec{0, 0}));
}

TEST(Drift, FiniteDifferences)
{
    BrownianStream s(42, 0);
    for (const auto& p : {make(Family::A, 4, {0.8}), make(Family::B, 3, {1.1, 0.3})})
        for (int n = 0; n < 100; ++n) {
            const Vec x = random_chamber_point(p.system(), s);
            const Vec d = p.drift(x);
            Vec into(x.size());
            ASSERT_TRUE(p.drift_into(x, into));
            EXPECT_EQ(into, d);
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double h = 1e-6;
                Vec xp = x, xm = x;
                xp[i] += h;
                xm[i] -= h;
                const double fd = -(p.phi(xp) - p.phi(xm)) / (2 * h);
                EXPECT_LE(std::abs(fd - d[i]), 1e-5 * std::max(1.0, std::abs(d[i])));
            }
        }
}

TEST(Generator, Examples)
{
    const TestFunction constant{[](std::span<const double>) { return 3.0; },
                                [](std::span<const double> x) { return Vec(x.size(), 0.0); },
                                [](std::span<const double>) { return 0.0; }};
    const auto a3 = make(Family::A, 4, {0.4});
    EXPECT_EQ(a3.apply_generator(constant, Vec{3, 2, 1, 0}), 0.0);
    EXPECT_NEAR(make(Family::RankOne, 1, {0.7}).apply_generator(norm_squared(), Vec{0.3}), 2.4, 1e-14);
}

TEST(Generator, NormSquaredIsEffectiveDimension)
{
    BrownianStream s(7, 0);
    for (const auto& p : {make(Family::A, 3, {0.3}), make(Family::A, 5, {1.7}),
                          make(Family::B, 2, {1.0, 0.5}), make(Family::B, 4, {0.1, 2.0})}) {
        const double target = static_cast<double>(p.dim()) + 2 * p.total_multiplicity();
        for (int n = 0; n < 50; ++n) {
            const Vec x = random_chamber_point(p.system(), s);
            EXPECT_NEAR(p.apply_generator(norm_squared(), x), target, 1e-12 * target);
        }
    }
}

TEST(Decomposition, WorkedExample)
{
    const auto p = make(Family::A, 3, {1.0});
    const Vec x{2, 1, 0};
    EXPECT_DOUBLE_EQ(dot(p.drift(x), p.system().simple(0)), 1.5);
    const auto split = p.simple_root_decomposition(0, x);
    EXPECT_DOUBLE_EQ(split.bessel_term, 2.0);
    EXPECT_NEAR(split.remainder, -0.5, 1e-15);
}

TEST(Decomposition, RankOneHasNoRemainder)
{
    const auto split = make(Family::RankOne, 1, {0.3}).simple_root_decomposition(0, Vec{0.7});
    EXPECT_EQ(split.remainder, 0.0);
    EXPECT_NEAR(split.bessel_term, 0.3 / 0.7, 1e-15);
}

TEST(Decomposition, SignAndReconstruction)
{
    BrownianStream s(11, 0);
    std::vector<Potential> systems;
    for (int m = 2; m <= 4; ++m) {
        systems.push_back(make(Family::A, m + 1, {0.35}));
        systems.push_back(make(Family::B, m, {0.6, 0.2}));
        systems.push_back(make(Family::B, m, {0.0, 1.5}));
    }
    for (const auto& p : systems)
        for (int n = 0; n < 100; ++n) {
            const Vec x = random_chamber_point(p.system(), s);
            const Vec d = p.drift(x);
            for (std::size_t j = 0; j < p.system().rank(); ++j) {
                const auto split = p.simple_root_decomposition(j, x);
                const double lhs = dot(d, p.system().simple(j));
                EXPECT_LE(split.remainder, 0.0);
                EXPECT_LE(std::abs(lhs - split.bessel_term - split.remainder),
                          1e-10 * std::max(1.0, std::abs(lhs)));
            }
        }
}

TEST(Decomposition, RejectsBadPosition)
{
    EXPECT_THROW(make(Family::A, 3, {1.0}).simple_root_decomposition(2, Vec{2, 1, 0}),
                 std::invalid_argument);
}

TEST(TotalMultiplicity, Examples)
{
    EXPECT_DOUBLE_EQ(make(Family::B, 2, {1.0, 0.5}).total_multiplicity(), 3.0);
    EXPECT_DOUBLE_EQ(make(Family::RankOne, 1, {0.3}).total_multiplicity(), 0.3);
    EXPECT_DOUBLE_EQ(make(Family::A, 4, {1.0}).total_multiplicity(), 6.0);
    EXPECT_THROW(make(Family::B, 2, {0.5}), std::invalid_argument);
}
