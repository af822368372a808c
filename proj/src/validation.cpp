#include "dunkl/validation.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "dunkl/config.hpp"
#include "dunkl/experiments.hpp"
#include "dunkl/io.hpp"
#include "dunkl/models.hpp"

namespace dunkl {

namespace {

std::string num(double v)
{
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

Potential make_potential(Family f, int m, std::vector<double> k)
{
    RootSystem rs = RootSystem::catalog(f, m);
    return Potential(std::move(rs), Multiplicity(std::move(k)));
}

PropertyResult catalog_counts()
{
    for (int m = 2; m <= 4; ++m) {
        const auto a = RootSystem::catalog(Family::A, m);
        const auto b = RootSystem::catalog(Family::B, m);
        if (a.size() != static_cast<std::size_t>(m * (m - 1)) || a.orbit_count() != 1)
            return {"catalog_counts", false, "A_" + std::to_string(m)};
        if (b.size() != static_cast<std::size_t>(2 * m * m) || b.orbit_count() != 2)
            return {"catalog_counts", false, "B_" + std::to_string(m)};
    }
    return {"catalog_counts", true, "A: m(m-1) roots, 1 orbit; B: 2m^2 roots, 2 orbits; m = 2..4"};
}

PropertyResult reflection_closure()
{
    std::size_t checked = 0;
    for (auto f : {Family::A, Family::B})
        for (int m = 2; m <= 4; ++m) {
            const auto rs = RootSystem::catalog(f, m);
            for (const auto& a : rs.roots())
                for (const auto& b : rs.roots()) {
                    ++checked;
                    if (!rs.find(reflect(a, b)))
                        return {"reflection_closure", false, to_string(f) + std::to_string(m)};
                }
        }
    return {"reflection_closure", true, std::to_string(checked) + " reflected roots found in R"};
}

PropertyResult closure_from_simple()
{
    for (auto f : {Family::A, Family::B})
        for (int m = 2; m <= 4; ++m) {
            const auto rs = RootSystem::catalog(f, m);
            std::vector<Vec> simple;
            for (std::size_t j = 0; j < rs.rank(); ++j)
                simple.push_back(rs.simple(j));
            if (!(RootSystem::from_simple(simple) == rs))
                return {"closure_from_simple", false, to_string(f) + std::to_string(m)};
        }
    return {"closure_from_simple", true, "closure of the simple roots equals the catalog"};
}

PropertyResult root_system_text_roundtrip()
{
    for (auto f : {Family::A, Family::B}) {
        const auto rs = RootSystem::catalog(f, 3);
        std::stringstream ss;
        write_root_system(ss, rs);
        if (!(read_root_system(ss) == rs))
            return {"root_system_text_roundtrip", false, to_string(f)};
    }
    return {"root_system_text_roundtrip", true, "A_3 and B_3 written and read back"};
}

PropertyResult drift_finite_differences(std::uint64_t seed)
{
    double worst = 0.0;
    const std::vector<Potential> systems{make_potential(Family::A, 3, {0.7}),
                                         make_potential(Family::B, 3, {0.4, 1.3})};
    std::uint64_t path = 0;
    for (const auto& p : systems) {
        BrownianStream s(seed, 1000 + path++);
        for (int n = 0; n < 100; ++n) {
            Vec x = random_chamber_point(p.system(), s);
            const Vec d = p.drift(x);
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double h = 1e-6 * std::max(1.0, std::abs(x[i]));
                Vec xp = x, xm = x;
                xp[i] += h;
                xm[i] -= h;
                const double fd = -(p.phi(xp) - p.phi(xm)) / (2.0 * h);
                worst = std::max(worst, std::abs(fd - d[i]) / std::max(1.0, std::abs(d[i])));
            }
        }
    }
    return {"drift_finite_differences", worst <= 1e-5, "max rel err " + num(worst)};
}

PropertyResult drift_particle_forms(std::uint64_t seed)
{
    double worst = 0.0;
    BrownianStream s(seed, 2000);
    const double k = 0.8;
    const auto a = make_potential(Family::A, 4, {k});
    for (int n = 0; n < 50; ++n) {
        const Vec x = random_chamber_point(a.system(), s);
        const Vec generic = a.drift(x);
        // Each positive root e_i - e_j contributes to both coordinates.
        const Vec particle = type_a_drift(x, k);
        worst = std::max(worst, max_abs_diff(generic, particle));
    }
    const auto params = LaguerreParams::make(3, 2.0, 4.0);
    const Potential b = laguerre_to_radial(params);
    for (int n = 0; n < 50; ++n) {
        const Vec r = random_chamber_point(b.system(), s);
        worst = std::max(worst, max_abs_diff(b.drift(r), radial_laguerre_drift(r, params)));
    }
    return {"drift_particle_forms", worst <= 1e-12, "max abs diff " + num(worst)};
}

PropertyResult simple_root_decomposition(std::uint64_t seed)
{
    double recon = 0.0, max_f = -INFINITY;
    const std::vector<Potential> systems{make_potential(Family::A, 3, {0.3}),
                                         make_potential(Family::B, 3, {0.2, 0.9}),
                                         make_potential(Family::B, 2, {1.0, 0.0})};
    BrownianStream s(seed, 3000);
    for (const auto& p : systems)
        for (int n = 0; n < 100; ++n) {
            const Vec x = random_chamber_point(p.system(), s);
            const Vec d = p.drift(x);
            for (std::size_t j = 0; j < p.system().rank(); ++j) {
                const auto split = p.simple_root_decomposition(j, x);
                const double lhs = dot(d, p.system().simple(j));
                recon = std::max(recon, std::abs(lhs - split.bessel_term - split.remainder) /
                                            std::max(1.0, std::abs(lhs)));
                max_f = std::max(max_f, split.remainder);
            }
        }
    const auto a2 = make_potential(Family::A, 3, {1.0});
    const Vec x{2.0, 1.0, 0.0};
    const double worked = a2.simple_root_decomposition(0, x).remainder;
    const bool ok = recon <= 1e-10 && max_f <= 0.0 && std::abs(worked + 0.5) <= 1e-12;
    return {"simple_root_decomposition", ok,
            "recon " + num(recon) + ", max F " + num(max_f) + ", A_2 worked F " + num(worked)};
}

PropertyResult generator_norm_squared(std::uint64_t seed)
{
    double worst = 0.0;
    TestFunction u{[](std::span<const double> x) { return norm2(x); },
                   [](std::span<const double> x) { return scaled(x, 2.0); },
                   [](std::span<const double> x) { return 2.0 * static_cast<double>(x.size()); }};
    const std::vector<Potential> systems{make_potential(Family::A, 4, {0.6}),
                                         make_potential(Family::B, 2, {0.5, 1.0}),
                                         make_potential(Family::RankOne, 1, {0.25})};
    BrownianStream s(seed, 4000);
    for (const auto& p : systems)
        for (int n = 0; n < 20; ++n) {
            const Vec x = random_chamber_point(p.system(), s);
            const double target = static_cast<double>(p.dim()) + 2.0 * p.total_multiplicity();
            worst = std::max(worst, std::abs(p.apply_generator(u, x) - target) / target);
        }
    return {"generator_norm_squared", worst <= 1e-12, "L|x|^2 = m + 2 gamma, max rel err " + num(worst)};
}

PropertyResult philox_known_answer()
{
    const auto a = Philox4x32::generate({0, 0, 0, 0}, {0, 0});
    const auto b = Philox4x32::generate({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                        {0xffffffffu, 0xffffffffu});
    const auto c = Philox4x32::generate({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                        {0xa4093822u, 0x299f31d0u});
    const bool ok = a == Philox4x32::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u} &&
                    b == Philox4x32::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu} &&
                    c == Philox4x32::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u};
    return {"philox_known_answer", ok, "three reference vectors"};
}

PropertyResult normal_stream_moments(std::uint64_t seed)
{
    BrownianStream s(seed, 5000);
    const std::size_t n = 200000;
    double sum = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double z = s.next_normal();
        sum += z;
        sq += z * z;
    }
    const double mean = sum / n, var = sq / n - mean * mean;
    // 5 standard errors for the mean and for the variance (sd of z^2 is sqrt 2).
    const bool ok = std::abs(mean) <= 5.0 / std::sqrt(n) && std::abs(var - 1.0) <= 5.0 * std::sqrt(2.0 / n);
    return {"normal_stream_moments", ok, "mean " + num(mean) + ", var " + num(var)};
}

PropertyResult config_roundtrip()
{
    RunConfig c;
    c.command = Command::Race;
    c.family = Family::B;
    c.rank = 2;
    c.k = {0.1, 0.4};
    c.x0 = {1.0 / 3.0, 0.1};
    c.sim.dt = 1e-3 / 7.0;
    c.sim.hit_epsilon = 1e-8;
    c.sim.master_seed = 18446744073709551615ull;
    c.alpha = 0;
    c.alpha2 = 1;
    bool ok = parse_config(render(c)) == c;
    bool rejects = false;
    try {
        parse_config("family = B\nrank = 2\nk = [0.5]\n");
    } catch (const ConfigError& e) {
        rejects = e.key() == "k";
    }
    return {"config_roundtrip", ok && rejects, "parse(render(c)) == c; orbit-count mismatch names k"};
}

PropertyResult path_determinism(std::uint64_t seed)
{
    const auto p = make_potential(Family::A, 3, {0.3});
    SimConfig cfg;
    cfg.horizon = 0.5;
    cfg.record_stride = 1;
    const Vec x0{1.0, 0.0, -1.0};
    std::string first, second;
    for (std::string* dst : {&first, &second}) {
        BrownianStream s(seed, 7);
        std::ostringstream out;
        write_csv(out, simulate_path(x0, p, cfg, s));
        *dst = out.str();
    }
    return {"path_determinism", first == second && !first.empty(), "same seed, byte-identical CSV"};
}

PropertyResult stays_in_chamber(std::uint64_t seed)
{
    const auto p = make_potential(Family::B, 2, {0.6, 0.8});
    const RootSystem& rs = p.system();
    SimConfig cfg;
    cfg.horizon = 1.0;
    cfg.record_stride = 1;
    const Vec x0{1.0, 0.5};
    for (std::size_t i = 0; i < 50; ++i) {
        BrownianStream s(seed, i);
        const PathRecord rec = simulate_path(x0, p, cfg, s);
        for (std::size_t r = 0; r < rec.size(); ++r)
            if (!(ChamberPoint::at(rs, Vec(rec.state(r).begin(), rec.state(r).end())).min_margin() >= 0.0))
                return {"stays_in_chamber", false, "path " + std::to_string(i) + " left the chamber"};
    }
    return {"stays_in_chamber", true, "50 B_2 paths stay in the closed chamber"};
}

PropertyResult bessel_hitting_law(std::uint64_t seed)
{
    // Dimension 1.5 Bessel from 1: T0 = 1 / (2 G), G ~ Gamma(1/4).
    const double k = 0.25, t = 2.0;
    const double exact = boost::math::gamma_q(0.5 - k, 1.0 / (2.0 * t));
    const auto p = make_potential(Family::RankOne, 1, {k});
    SimConfig cfg;
    cfg.horizon = t;
    cfg.n_paths = 400;
    cfg.master_seed = seed;
    HitExpectation e;
    e.mode = HitExpectation::Mode::Hit;
    const auto r = hitting_probability(p, Vec{1.0}, cfg, e);
    std::size_t hits = static_cast<std::size_t>(std::llround(r.estimate * (cfg.n_paths - r.n_failed)));
    const Interval wide = wilson_interval(hits, cfg.n_paths - r.n_failed, 0.999);
    return {"bessel_hitting_law", wide.contains(exact) && r.valid(),
            "P(T0 <= 2) est " + num(r.estimate) + ", exact " + num(exact)};
}

PropertyResult small_moment_check(std::uint64_t seed)
{
    const auto p = make_potential(Family::B, 2, {0.5, 1.0});
    SimConfig cfg;
    cfg.horizon = 0.5;
    cfg.dt = 2e-3;
    cfg.n_paths = 400;
    cfg.master_seed = seed;
    const auto r = moment_check(p, Vec{2.0, 1.0}, cfg);
    return {"small_moment_check", r.pass.value_or(false) && r.valid(),
            "slope " + num(r.estimate) + " vs " + num(8.0)};
}

PropertyResult small_dominance(std::uint64_t seed)
{
    const auto p = make_potential(Family::A, 3, {0.3});
    SimConfig cfg;
    cfg.horizon = 0.5;
    cfg.n_paths = 40;
    cfg.master_seed = seed;
    const auto r = dominance_experiment(p, 0, Vec{2.0, 1.0, 0.0}, cfg);
    return {"small_dominance", r.pass.value_or(false) && r.valid(),
            "violation fraction " + num(r.estimate)};
}

PropertyResult bessel_parameters()
{
    const auto b = bessel_params(0.25);
    const auto params = LaguerreParams::make(2, 2.0, 3.0);
    const bool ok = b.dimension == 1.5 && b.index == -0.25 && params.k0 == 1.5 && params.k1 == 1.0 &&
                    params.strong_regime();
    return {"model_parameters", ok, "rank-one dimension 2k+1; Laguerre k0, k1"};
}

}  // namespace

Vec random_chamber_point(const RootSystem& rs, BrownianStream& stream, double min_margin)
{
    Vec x(rs.dim());
    for (;;) {
        stream.fill_normal(x);
        for (int guard = 0; guard < 1000; ++guard) {
            bool moved = false;
            for (std::size_t j = 0; j < rs.rank(); ++j)
                if (dot(rs.simple(j), x) < 0.0) {
                    x = reflect(rs.simple(j), x);
                    moved = true;
                }
            if (!moved)
                break;
        }
        bool ok = true;
        for (std::size_t j = 0; j < rs.rank(); ++j)
            ok = ok && dot(rs.simple(j), x) >= min_margin;
        if (ok)
            return x;
    }
}

std::vector<PropertyResult> run_validation(std::uint64_t seed)
{
    std::vector<std::function<PropertyResult()>> suite{
        catalog_counts,
        reflection_closure,
        closure_from_simple,
        root_system_text_roundtrip,
        [&] { return drift_finite_differences(seed); },
        [&] { return drift_particle_forms(seed); },
        [&] { return simple_root_decomposition(seed); },
        [&] { return generator_norm_squared(seed); },
        philox_known_answer,
        [&] { return normal_stream_moments(seed); },
        config_roundtrip,
        bessel_parameters,
        [&] { return path_determinism(seed); },
        [&] { return stays_in_chamber(seed); },
        [&] { return bessel_hitting_law(seed); },
        [&] { return small_moment_check(seed); },
        [&] { return small_dominance(seed); },
    };
    std::vector<PropertyResult> out;
    for (std::size_t i = 0; i < suite.size(); ++i) {
        try {
            out.push_back(suite[i]());
        } catch (const std::exception& e) {
            out.push_back({"check_" + std::to_string(i), false, std::string("threw: ") + e.what()});
        }
    }
    return out;
}

}  // namespace dunkl
