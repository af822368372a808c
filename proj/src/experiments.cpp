#include "dunkl/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "dunkl/parallel.hpp"

namespace dunkl {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

Json vec_json(std::span<const double> v) { return Json(std::vector<double>(v.begin(), v.end())); }

std::size_t whole_horizon_stride(const SimConfig& cfg)
{
    return static_cast<std::size_t>(std::ceil(cfg.horizon / cfg.dt)) + 1;
}

Json base_parameters(const Potential& p, std::span<const double> x0, const SimConfig& cfg)
{
    Json j;
    j["system"] = describe(p);
    j["x0"] = vec_json(x0);
    j["config"] = describe(cfg);
    j["seed"] = cfg.master_seed;
    return j;
}

void finalize_validity(ExperimentReport& r)
{
    if (!r.valid()) {
        r.details["invalid_reason"] = "step failures exceed 0.5% of paths";
        if (r.pass)
            r.pass = false;
    }
}

double min_k_on_simple(const Potential& p)
{
    double mn = std::numeric_limits<double>::infinity();
    const RootSystem& rs = p.system();
    for (auto idx : rs.simple_indices())
        mn = std::min(mn, p.multiplicity().of_root(rs, idx));
    return mn;
}

struct StoppedSample {
    bool failed = false;
    double tau = 0.0;
    double value = 0.0;
};

}  // namespace

bool ExperimentReport::valid() const { return failed_fraction() < kMaxFailedFraction; }

double ExperimentReport::failed_fraction() const
{
    return n_paths == 0 ? 0.0 : static_cast<double>(n_failed) / static_cast<double>(n_paths);
}

Json describe(const Potential& p)
{
    const RootSystem& rs = p.system();
    Json j;
    j["dim"] = rs.dim();
    j["roots"] = rs.size();
    j["orbits"] = rs.orbit_count();
    Json simple = Json::array();
    for (std::size_t s = 0; s < rs.rank(); ++s)
        simple.push_back(vec_json(rs.simple(s)));
    j["simple"] = simple;
    j["k"] = p.multiplicity().values();
    j["gamma"] = p.total_multiplicity();
    return j;
}

Json describe(const SimConfig& cfg)
{
    Json j;
    j["dt"] = cfg.dt;
    j["horizon"] = cfg.horizon;
    j["hit_epsilon"] = cfg.hit_epsilon ? Json(*cfg.hit_epsilon) : Json(nullptr);
    j["substep_max"] = cfg.substep_max;
    j["clip_fraction"] = cfg.clip_fraction;
    j["master_seed"] = cfg.master_seed;
    j["n_paths"] = cfg.n_paths;
    j["record_stride"] = cfg.record_stride;
    return j;
}

ExperimentReport hitting_probability(const Potential& p, std::span<const double> x0,
                                     const SimConfig& cfg_in, const HitExpectation& expect)
{
    const auto start = Clock::now();
    cfg_in.validate();
    SimConfig cfg = cfg_in;
    cfg.record_stride = whole_horizon_stride(cfg);

    struct Summary {
        bool failed = false;
        bool hit = false;
        double time = 0.0;
        std::size_t root = 0;
        std::size_t substeps = 0;
    };
    const auto paths = parallel_map<Summary>(cfg.n_paths, [&](std::size_t i) {
        BrownianStream stream(cfg.master_seed, i);
        const PathRecord rec = simulate_path(x0, p, cfg, stream);
        Summary s;
        s.failed = rec.failed();
        s.hit = rec.hit;
        s.time = rec.hit_time.value_or(0.0);
        s.root = rec.hit_root.value_or(0);
        s.substeps = rec.substeps_used;
        return s;
    });

    ExperimentReport r;
    r.name = "hitting";
    r.parameters = base_parameters(p, x0, cfg_in);
    r.n_paths = cfg.n_paths;
    const std::vector<double> fractions{0.25, 0.5, 1.0};
    std::vector<std::size_t> hits_by(fractions.size(), 0);
    std::vector<std::size_t> per_root(p.system().rank(), 0);
    std::size_t used = 0;
    double substeps = 0.0;
    for (const auto& s : paths) {
        if (s.failed) {
            ++r.n_failed;
            continue;
        }
        ++used;
        substeps += static_cast<double>(s.substeps);
        if (!s.hit)
            continue;
        ++per_root[s.root];
        for (std::size_t f = 0; f < fractions.size(); ++f)
            if (s.time <= fractions[f] * cfg.horizon)
                ++hits_by[f];
    }
    const std::size_t hits = hits_by.back();
    r.estimate = used ? static_cast<double>(hits) / static_cast<double>(used) : 0.0;
    r.ci = wilson_interval(hits, used);
    r.ci_method = "wilson";

    bool expect_hit = false;
    switch (expect.mode) {
    case HitExpectation::Mode::Hit: expect_hit = true; break;
    case HitExpectation::Mode::NoHit: expect_hit = false; break;
    case HitExpectation::Mode::Auto: expect_hit = min_k_on_simple(p) < 0.5; break;
    }
    if (expect_hit) {
        r.tolerance = expect.hit_threshold;
        r.rule = "estimate >= tolerance";
        r.pass = r.estimate >= expect.hit_threshold;
    } else {
        r.tolerance = expect.no_hit_threshold;
        r.rule = "estimate <= tolerance";
        r.pass = r.estimate <= expect.no_hit_threshold;
    }
    Json curve = Json::array();
    for (std::size_t f = 0; f < fractions.size(); ++f) {
        Json c;
        c["horizon"] = fractions[f] * cfg.horizon;
        c["estimate"] = used ? static_cast<double>(hits_by[f]) / static_cast<double>(used) : 0.0;
        curve.push_back(c);
    }
    r.details["expect_hit"] = expect_hit;
    r.details["hit_epsilon"] = cfg.hit_epsilon_for(x0);
    r.details["curve"] = curve;
    r.details["hits_by_simple_root"] = per_root;
    r.details["mean_substeps"] = used ? substeps / static_cast<double>(used) : 0.0;
    finalize_validity(r);
    r.runtime_seconds = seconds_since(start);
    return r;
}

ExperimentReport dominance_experiment(const Potential& p, std::size_t j,
                                      std::span<const double> x0, const SimConfig& cfg_in,
                                      std::optional<double> y0_in, std::optional<double> tol_in)
{
    const auto start = Clock::now();
    cfg_in.validate();
    if (j >= p.system().rank())
        throw std::invalid_argument("dominance_experiment: not a simple root position");
    SimConfig cfg = cfg_in;
    cfg.record_stride = 1;
    const Vec& a0 = p.system().simple(j);
    const double y0 = y0_in.value_or(dot(a0, x0));
    const double tol = tol_in.value_or(5.0 * std::sqrt(cfg.dt));

    struct Summary {
        bool failed = false;
        std::size_t pairs = 0;
        std::size_t violations = 0;
        double worst_gap = -std::numeric_limits<double>::infinity();
        bool y_hit = false;
        bool late_x = false;
    };
    const auto paths = parallel_map<Summary>(cfg.n_paths, [&](std::size_t i) {
        BrownianStream stream(cfg.master_seed, i);
        const CoupledPaths cp = simulate_coupled_comparison(x0, j, y0, p, cfg, stream);
        Summary s;
        s.failed = cp.x.failed() || cp.y.failed();
        std::size_t a = 0, b = 0;
        while (a < cp.x.size() && b < cp.y.size()) {
            const double ta = cp.x.times[a], tb = cp.y.times[b];
            if (ta < tb) {
                ++a;
            } else if (tb < ta) {
                ++b;
            } else {
                const double proj = dot(a0, cp.x.state(a));
                const double y = cp.y.state(b)[0];
                ++s.pairs;
                s.worst_gap = std::max(s.worst_gap, proj - y);
                if (y < proj - tol)
                    ++s.violations;
                ++a;
                ++b;
            }
        }
        if (cp.y.hit) {
            s.y_hit = true;
            const double ty = *cp.y.hit_time;
            s.late_x = !cp.x.hit || *cp.x.hit_time > ty + cfg.dt;
        }
        return s;
    });

    ExperimentReport r;
    r.name = "dominance";
    r.parameters = base_parameters(p, x0, cfg_in);
    r.parameters["alpha0"] = j;
    r.parameters["y0"] = y0;
    r.n_paths = cfg.n_paths;
    std::size_t pairs = 0, violations = 0, y_hits = 0, late = 0;
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& s : paths) {
        if (s.failed) {
            ++r.n_failed;
            continue;
        }
        pairs += s.pairs;
        violations += s.violations;
        worst = std::max(worst, s.worst_gap);
        y_hits += s.y_hit;
        late += s.late_x;
    }
    r.estimate = pairs ? static_cast<double>(violations) / static_cast<double>(pairs) : 0.0;
    r.ci = wilson_interval(violations, pairs);
    r.ci_method = "wilson";
    r.tolerance = 1e-3;
    r.rule = "violation fraction <= tolerance";
    r.pass = pairs > 0 && r.estimate <= r.tolerance;
    r.details["margin_tolerance"] = tol;
    r.details["grid_pairs"] = pairs;
    r.details["violations"] = violations;
    r.details["max_excess"] = pairs ? worst : 0.0;
    r.details["comparison_hits"] = y_hits;
    r.details["comparison_hits_before_process"] = late;
    finalize_validity(r);
    r.runtime_seconds = seconds_since(start);
    return r;
}

ExperimentReport boundary_occupation(const Potential& p, std::span<const double> x0,
                                     const SimConfig& cfg_in, std::vector<double> epsilons)
{
    const auto start = Clock::now();
    cfg_in.validate();
    for (double k : p.multiplicity().values())
        if (!(k > 0.0))
            throw std::invalid_argument("boundary_occupation: every multiplicity must be > 0");
    if (epsilons.empty())
        throw std::invalid_argument("boundary_occupation: no epsilons given");
    for (double e : epsilons)
        if (!(e > 0.0))
            throw std::invalid_argument("boundary_occupation: epsilons must be > 0");
    std::sort(epsilons.begin(), epsilons.end(), std::greater<>());
    SimConfig cfg = cfg_in;
    cfg.record_stride = 1;

    struct Summary {
        bool failed = false;
        std::vector<double> fraction;
    };
    const auto paths = parallel_map<Summary>(cfg.n_paths, [&](std::size_t i) {
        BrownianStream stream(cfg.master_seed, i);
        const PathRecord rec = simulate_path(x0, p, cfg, stream);
        Summary s;
        s.failed = rec.failed();
        s.fraction.assign(epsilons.size(), 0.0);
        // Grid rows after t = 0; a terminal hit row is off the grid.
        std::size_t rows = rec.size() - (rec.hit ? 1 : 0);
        if (rows <= 1)
            return s;
        for (std::size_t row = 1; row < rows; ++row)
            for (std::size_t e = 0; e < epsilons.size(); ++e)
                if (rec.row_margins[row] < epsilons[e])
                    s.fraction[e] += 1.0;
        for (auto& f : s.fraction)
            f /= static_cast<double>(rows - 1);
        return s;
    });

    ExperimentReport r;
    r.name = "occupation";
    r.parameters = base_parameters(p, x0, cfg_in);
    r.parameters["epsilons"] = epsilons;
    r.n_paths = cfg.n_paths;
    std::vector<std::vector<double>> samples(epsilons.size());
    for (const auto& s : paths) {
        if (s.failed) {
            ++r.n_failed;
            continue;
        }
        for (std::size_t e = 0; e < epsilons.size(); ++e)
            samples[e].push_back(s.fraction[e]);
    }
    Json profile = Json::array();
    std::vector<MeanEstimate> est;
    for (std::size_t e = 0; e < epsilons.size(); ++e) {
        est.push_back(t_interval(samples[e]));
        Json row;
        row["epsilon"] = epsilons[e];
        row["occupation"] = est.back().mean;
        row["ci_low"] = est.back().ci.low;
        row["ci_high"] = est.back().ci.high;
        profile.push_back(row);
    }
    bool strict = true, monotone = true, strict_where_positive = true;
    for (std::size_t e = 1; e < est.size(); ++e) {
        const double larger = est[e - 1].mean, smaller = est[e].mean;
        if (!(smaller < larger))
            strict = false;
        if (smaller > larger)
            monotone = false;
        if (larger > 0.0 && !(smaller < larger))
            strict_where_positive = false;
    }
    r.estimate = est.back().mean;
    r.ci = est.back().ci;
    r.ci.low = std::min(r.ci.low, r.estimate);
    r.ci.high = std::max(r.ci.high, r.estimate);
    r.ci_method = "t";
    r.tolerance = 0.01;
    r.rule = "occupation at smallest epsilon < tolerance and profile decreasing in epsilon";
    r.pass = r.estimate < r.tolerance && monotone && strict_where_positive;
    r.details["profile"] = profile;
    r.details["strictly_decreasing"] = strict;
    r.details["monotone"] = monotone;
    finalize_validity(r);
    r.runtime_seconds = seconds_since(start);
    return r;
}

namespace {

ExperimentReport stopped_moment_report(std::string name, const std::vector<StoppedSample>& paths,
                                       double slope, std::size_t n_paths)
{
    ExperimentReport r;
    r.name = std::move(name);
    r.n_paths = n_paths;
    std::vector<double> residual, tau;
    double growth = 0.0;
    for (const auto& s : paths) {
        if (s.failed) {
            ++r.n_failed;
            continue;
        }
        residual.push_back(s.value - slope * s.tau);
        tau.push_back(s.tau);
        growth += s.value;
    }
    const MeanEstimate res = t_interval(residual);
    const MeanEstimate mean_tau = t_interval(tau);
    const double denom = mean_tau.mean > 0.0 ? mean_tau.mean : 1.0;
    growth = residual.empty() ? 0.0 : growth / static_cast<double>(residual.size());
    r.estimate = growth / denom;
    const double half = (res.ci.high - res.ci.low) / (2.0 * denom);
    r.ci = {r.estimate - half, r.estimate + half};
    r.ci_method = "t";
    r.tolerance = 3.0;
    r.rule = "|mean residual| <= tolerance * standard error";
    const double z = res.std_error > 0.0 ? res.mean / res.std_error : 0.0;
    r.pass = !residual.empty() && std::abs(res.mean) <= r.tolerance * res.std_error;
    r.details["target_slope"] = slope;
    r.details["residual_mean"] = res.mean;
    r.details["residual_std_error"] = res.std_error;
    r.details["z_score"] = z;
    r.details["mean_stopping_time"] = mean_tau.mean;
    return r;
}

}  // namespace

ExperimentReport moment_check(const Potential& p, std::span<const double> x0, const SimConfig& cfg_in)
{
    const auto start = Clock::now();
    cfg_in.validate();
    SimConfig cfg = cfg_in;
    cfg.record_stride = whole_horizon_stride(cfg);
    const double r0 = norm2(x0);
    const auto paths = parallel_map<StoppedSample>(cfg.n_paths, [&](std::size_t i) {
        BrownianStream stream(cfg.master_seed, i);
        const PathRecord rec = simulate_path(x0, p, cfg, stream);
        return StoppedSample{rec.failed(), rec.final_time(), norm2(rec.state(rec.size() - 1)) - r0};
    });
    const double slope = static_cast<double>(p.dim()) + 2.0 * p.total_multiplicity();
    ExperimentReport r = stopped_moment_report("moments", paths, slope, cfg.n_paths);
    r.parameters = base_parameters(p, x0, cfg_in);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < paths.size(); ++i)
        hits += (!paths[i].failed && paths[i].tau < cfg.horizon);
    r.details["stopped_paths"] = hits;
    finalize_validity(r);
    r.runtime_seconds = seconds_since(start);
    return r;
}

ExperimentReport laguerre_moment_check(const LaguerreParams& params, std::span<const double> lambda0,
                                       const SimConfig& cfg_in)
{
    const auto start = Clock::now();
    cfg_in.validate();
    SimConfig cfg = cfg_in;
    cfg.record_stride = whole_horizon_stride(cfg);
    double trace0 = 0.0;
    for (double l : lambda0)
        trace0 += l;
    const auto paths = parallel_map<StoppedSample>(cfg.n_paths, [&](std::size_t i) {
        BrownianStream stream(cfg.master_seed, i);
        const PathRecord rec = simulate_laguerre(lambda0, params, cfg, stream);
        double trace = 0.0;
        for (double l : rec.state(rec.size() - 1))
            trace += l;
        return StoppedSample{rec.failed(), rec.final_time(), trace - trace0};
    });
    const double slope = params.beta * params.delta * params.m;
    ExperimentReport r = stopped_moment_report("laguerre_moments", paths, slope, cfg.n_paths);
    Json pj;
    pj["m"] = params.m;
    pj["beta"] = params.beta;
    pj["delta"] = params.delta;
    pj["k0"] = params.k0;
    pj["k1"] = params.k1;
    r.parameters["laguerre"] = pj;
    r.parameters["lambda0"] = vec_json(lambda0);
    r.parameters["config"] = describe(cfg_in);
    r.parameters["seed"] = cfg_in.master_seed;

    // Square-root route through the B_m radial process, on disjoint streams.
    if (params.k0 >= 0.0) {
        const Potential radial = laguerre_to_radial(params);
        const Vec r0 = sqrt_map(lambda0);
        const auto rpaths = parallel_map<StoppedSample>(cfg.n_paths, [&](std::size_t i) {
            BrownianStream stream(cfg.master_seed, cfg.n_paths + i);
            const PathRecord rec = simulate_path(r0, radial, cfg, stream);
            return StoppedSample{rec.failed(), rec.final_time(),
                                 norm2(rec.state(rec.size() - 1)) - trace0};
        });
        ExperimentReport rr = stopped_moment_report("radial", rpaths, slope, cfg.n_paths);
        std::vector<double> a, b;
        for (const auto& s : paths)
            if (!s.failed)
                a.push_back(s.value - slope * s.tau);
        for (const auto& s : rpaths)
            if (!s.failed)
                b.push_back(s.value - slope * s.tau);
        const MeanEstimate ea = t_interval(a), eb = t_interval(b);
        const double se = std::hypot(ea.std_error, eb.std_error);
        const bool agree = std::abs(ea.mean - eb.mean) <= 3.0 * se;
        Json route;
        route["slope_estimate"] = rr.estimate;
        route["residual_mean"] = rr.details["residual_mean"];
        route["residual_std_error"] = rr.details["residual_std_error"];
        route["pass"] = *rr.pass;
        route["failed"] = rr.n_failed;
        route["routes_agree"] = agree;
        r.details["radial_route"] = route;
        r.pass = *r.pass && *rr.pass && agree && rr.valid();
    }
    finalize_validity(r);
    r.runtime_seconds = seconds_since(start);
    return r;
}

ExperimentReport hitting_race(const Potential& p, std::span<const double> x0, std::size_t a1,
                              std::size_t a2, const SimConfig& cfg_in)
{
    const auto start = Clock::now();
    cfg_in.validate();
    const RootSystem& rs = p.system();
    if (a1 >= rs.rank() || a2 >= rs.rank() || a1 == a2)
        throw std::invalid_argument("hitting_race: need two distinct simple root positions");
    const double k1 = p.multiplicity().of_root(rs, rs.simple_indices()[a1]);
    const double k2 = p.multiplicity().of_root(rs, rs.simple_indices()[a2]);
    if (!(k1 < 0.5 && k2 < 0.5))
        throw std::invalid_argument("hitting_race: both multiplicities must be < 1/2");
    SimConfig cfg = cfg_in;
    cfg.record_stride = whole_horizon_stride(cfg);

    struct Summary {
        bool failed = false;
        int first = -1;
    };
    const auto paths = parallel_map<Summary>(cfg.n_paths, [&](std::size_t i) {
        BrownianStream stream(cfg.master_seed, i);
        const PathRecord rec = simulate_path(x0, p, cfg, stream);
        Summary s;
        s.failed = rec.failed();
        if (rec.hit && rec.hit_root)
            s.first = static_cast<int>(*rec.hit_root);
        return s;
    });

    ExperimentReport r;
    r.name = "race";
    r.parameters = base_parameters(p, x0, cfg_in);
    r.parameters["alpha1"] = a1;
    r.parameters["alpha2"] = a2;
    r.n_paths = cfg.n_paths;
    std::size_t first1 = 0, first2 = 0, other = 0, undecided = 0;
    for (const auto& s : paths) {
        if (s.failed) {
            ++r.n_failed;
            continue;
        }
        if (s.first < 0)
            ++undecided;
        else if (static_cast<std::size_t>(s.first) == a1)
            ++first1;
        else if (static_cast<std::size_t>(s.first) == a2)
            ++first2;
        else
            ++other;
    }
    const std::size_t decided = first1 + first2;
    r.estimate = decided ? static_cast<double>(first1) / static_cast<double>(decided) : 0.5;
    r.ci = wilson_interval(first1, decided);
    r.ci_method = "wilson";
    r.rule = "exploratory";
    r.details["k_alpha1"] = k1;
    r.details["k_alpha2"] = k2;
    r.details["same_orbit"] = rs.orbit_of(rs.simple_indices()[a1]) == rs.orbit_of(rs.simple_indices()[a2]);
    r.details["alpha1_first"] = first1;
    r.details["alpha2_first"] = first2;
    r.details["other_wall_first"] = other;
    r.details["undecided"] = undecided;
    finalize_validity(r);
    r.runtime_seconds = seconds_since(start);
    return r;
}

Json to_json(const ExperimentReport& r, bool include_runtime)
{
    Json j;
    j["name"] = r.name;
    j["parameters"] = r.parameters;
    j["estimate"] = r.estimate;
    j["ci_low"] = r.ci.low;
    j["ci_high"] = r.ci.high;
    j["ci_method"] = r.ci_method;
    j["confidence"] = 0.95;
    j["n_paths"] = r.n_paths;
    j["n_failed"] = r.n_failed;
    j["pass"] = r.pass ? Json(*r.pass) : Json(nullptr);
    j["tolerance"] = r.tolerance;
    j["rule"] = r.rule;
    j["details"] = r.details;
    if (include_runtime)
        j["runtime_seconds"] = r.runtime_seconds;
    return j;
}

ExperimentReport report_from_json(const Json& j)
{
    ExperimentReport r;
    r.name = j.at("name").get<std::string>();
    r.parameters = j.at("parameters");
    r.estimate = j.at("estimate").get<double>();
    r.ci = {j.at("ci_low").get<double>(), j.at("ci_high").get<double>()};
    r.ci_method = j.at("ci_method").get<std::string>();
    r.n_paths = j.at("n_paths").get<std::size_t>();
    r.n_failed = j.at("n_failed").get<std::size_t>();
    if (!j.at("pass").is_null())
        r.pass = j.at("pass").get<bool>();
    r.tolerance = j.at("tolerance").get<double>();
    r.rule = j.at("rule").get<std::string>();
    r.details = j.at("details");
    if (j.contains("runtime_seconds"))
        r.runtime_seconds = j.at("runtime_seconds").get<double>();
    return r;
}

std::string report_file_name(const ExperimentReport& r)
{
    std::uint64_t seed = 0;
    if (r.parameters.contains("seed"))
        seed = r.parameters.at("seed").get<std::uint64_t>();
    return r.name + "_" + std::to_string(seed) + ".json";
}

std::string write_report(const std::string& dir, const ExperimentReport& r)
{
    std::filesystem::create_directories(dir);
    const auto path = (std::filesystem::path(dir) / report_file_name(r)).string();
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open " + path + " for writing");
    out << to_json(r).dump(2) << '\n';
    if (!out)
        throw std::runtime_error("failed writing " + path);
    return path;
}

}  // namespace dunkl
