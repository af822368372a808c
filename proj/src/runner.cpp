#include "dunkl/runner.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "dunkl/experiments.hpp"
#include "dunkl/io.hpp"
#include "dunkl/models.hpp"
#include "dunkl/parallel.hpp"
#include "dunkl/validation.hpp"

namespace dunkl {

namespace {

std::string summary(const ExperimentReport& r)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s seed=%llu estimate=%.6g ci=[%.6g, %.6g] n=%zu failed=%zu pass=%s runtime=%.2fs",
                  r.name.c_str(),
                  static_cast<unsigned long long>(r.parameters.value("seed", std::uint64_t{0})),
                  r.estimate, r.ci.low, r.ci.high, r.n_paths, r.n_failed,
                  r.pass ? (*r.pass ? "true" : "false") : "n/a", r.runtime_seconds);
    return buf;
}

Potential potential_of(const RunConfig& c)
{
    RootSystem rs = RootSystem::catalog(*c.family, *c.rank);
    return Potential(std::move(rs), Multiplicity(c.k));
}

HitExpectation expectation_of(const RunConfig& c)
{
    HitExpectation e;
    if (c.expect == "hit")
        e.mode = HitExpectation::Mode::Hit;
    else if (c.expect == "no_hit")
        e.mode = HitExpectation::Mode::NoHit;
    if (c.threshold) {
        e.hit_threshold = *c.threshold;
        e.no_hit_threshold = *c.threshold;
    }
    return e;
}

int simulate(const RunConfig& c, std::ostream& log, bool quiet)
{
    const auto start = std::chrono::steady_clock::now();
    std::filesystem::create_directories(c.out);
    std::optional<Potential> p;
    std::optional<LaguerreParams> lag;
    if (c.model == Model::Laguerre)
        lag = LaguerreParams::make(*c.rank, *c.beta, *c.delta);
    else
        p.emplace(potential_of(c));

    struct Summary {
        bool failed = false;
        bool hit = false;
    };
    const auto paths = parallel_map<Summary>(c.sim.n_paths, [&](std::size_t i) {
        BrownianStream stream(c.sim.master_seed, i);
        const PathRecord rec = lag ? simulate_laguerre(c.x0, *lag, c.sim, stream)
                                   : simulate_path(c.x0, *p, c.sim, stream);
        const auto file = std::filesystem::path(c.out) /
                          ("path_" + std::to_string(c.sim.master_seed) + "_" + std::to_string(i) + ".csv");
        write_csv_file(file.string(), rec);
        return Summary{rec.failed(), rec.hit};
    });
    std::size_t failed = 0, hits = 0;
    for (const auto& s : paths) {
        failed += s.failed;
        hits += s.hit;
    }
    if (!quiet) {
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        char buf[200];
        std::snprintf(buf, sizeof buf, "simulate seed=%llu paths=%zu hits=%zu failed=%zu runtime=%.2fs",
                      static_cast<unsigned long long>(c.sim.master_seed), paths.size(), hits, failed, secs);
        log << buf << '\n';
    }
    return failed == 0 ? 0 : 1;
}

int validate(const RunConfig& c, std::ostream& log, bool quiet)
{
    const auto results = run_validation(c.sim.master_seed);
    Json j;
    j["name"] = "validate";
    j["seed"] = c.sim.master_seed;
    Json props = Json::array();
    bool all = true;
    for (const auto& r : results) {
        all = all && r.pass;
        Json e;
        e["name"] = r.name;
        e["pass"] = r.pass;
        e["detail"] = r.detail;
        props.push_back(e);
        if (!quiet)
            log << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
    }
    j["properties"] = props;
    j["pass"] = all;
    std::filesystem::create_directories(c.out);
    const auto path = std::filesystem::path(c.out) / ("validate_" + std::to_string(c.sim.master_seed) + ".json");
    std::ofstream out(path);
    out << j.dump(2) << '\n';
    if (!out)
        throw std::runtime_error("failed writing " + path.string());
    if (!quiet)
        log << "validate seed=" << c.sim.master_seed << " properties=" << results.size()
            << " pass=" << (all ? "true" : "false") << '\n';
    return all ? 0 : 1;
}

}  // namespace

int run(const RunConfig& c, std::ostream& log, bool quiet)
{
    c.validate();
    if (c.command == Command::Validate)
        return validate(c, log, quiet);
    if (c.command == Command::Simulate)
        return simulate(c, log, quiet);

    ExperimentReport r;
    if (c.command == Command::Moments && c.model == Model::Laguerre) {
        r = laguerre_moment_check(LaguerreParams::make(*c.rank, *c.beta, *c.delta), c.x0, c.sim);
    } else {
        const Potential p = potential_of(c);
        switch (c.command) {
        case Command::Hitting: r = hitting_probability(p, c.x0, c.sim, expectation_of(c)); break;
        case Command::Compare: r = dominance_experiment(p, *c.alpha, c.x0, c.sim, c.y0); break;
        case Command::Occupation: r = boundary_occupation(p, c.x0, c.sim, c.epsilons); break;
        case Command::Moments: r = moment_check(p, c.x0, c.sim); break;
        case Command::Race: r = hitting_race(p, c.x0, *c.alpha, *c.alpha2, c.sim); break;
        default: throw std::logic_error("unhandled command");
        }
    }
    write_report(c.out, r);
    if (!quiet)
        log << summary(r) << '\n';
    return (r.pass.value_or(true) && r.valid()) ? 0 : 1;
}

}  // namespace dunkl
