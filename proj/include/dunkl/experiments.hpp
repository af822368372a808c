#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "dunkl/models.hpp"
#include "dunkl/potential.hpp"
#include "dunkl/sde.hpp"
#include "dunkl/stats.hpp"

namespace dunkl {

using Json = nlohmann::ordered_json;

/// Outcome of one Monte Carlo experiment. Every field except runtime is a
/// deterministic function of the experiment parameters and master seed.
struct ExperimentReport {
    std::string name;
    Json parameters = Json::object();
    double estimate = 0.0;
    Interval ci;
    std::string ci_method;
    std::size_t n_paths = 0;
    std::size_t n_failed = 0;
    /// Unset for exploratory experiments.
    std::optional<bool> pass;
    double tolerance = 0.0;
    std::string rule;
    Json details = Json::object();
    double runtime_seconds = 0.0;

    /// Step failures below 0.5% of paths.
    bool valid() const;
    double failed_fraction() const;
};

/// Largest tolerated fraction of step-failure paths.
inline constexpr double kMaxFailedFraction = 0.005;

struct HitExpectation {
    enum class Mode { Auto, Hit, NoHit };
    Mode mode = Mode::Auto;
    /// Pass threshold when hitting is expected: P(T0 <= T) >= hit_threshold.
    double hit_threshold = 0.95;
    /// Pass threshold when hitting is not expected: P(T0 <= T) <= no_hit_threshold.
    double no_hit_threshold = 0.02;
};

/// P(T0 <= T) with a Wilson interval. In Auto mode hitting is expected iff
/// some simple root has multiplicity < 1/2.
ExperimentReport hitting_probability(const Potential& p, std::span<const double> x0,
                                     const SimConfig& cfg, const HitExpectation& expect = {});

/// Fraction of common grid points with Y < <alpha0, X> - tol for the coupled
/// comparison pair; passes at <= 0.1%. tol defaults to 5 sqrt(dt).
ExperimentReport dominance_experiment(const Potential& p, std::size_t simple_position,
                                      std::span<const double> x0, const SimConfig& cfg,
                                      std::optional<double> y0 = std::nullopt,
                                      std::optional<double> tol = std::nullopt);

/// Mean fraction of grid time with minimal simple-root margin below each
/// epsilon. Requires every multiplicity to be > 0.
ExperimentReport boundary_occupation(const Potential& p, std::span<const double> x0,
                                     const SimConfig& cfg, std::vector<double> epsilons);

/// E|X_t|^2 grows at rate m + 2 gamma. Checked on the stopped martingale
/// |X_tau|^2 - |x0|^2 - (m + 2 gamma) tau, tau = min(T, T0), within 3 standard
/// errors of zero.
ExperimentReport moment_check(const Potential& p, std::span<const double> x0,
                              const SimConfig& cfg);

/// Trace of the Laguerre process grows at rate beta delta m, checked the same
/// way in lambda coordinates, plus a distributional comparison against the
/// B_m radial route started at sqrt(lambda0).
ExperimentReport laguerre_moment_check(const LaguerreParams& params,
                                       std::span<const double> lambda0, const SimConfig& cfg);

/// Exploratory estimate of P(T_alpha1 < T_alpha2) among paths that hit one of
/// the two walls first. No pass/fail.
ExperimentReport hitting_race(const Potential& p, std::span<const double> x0,
                              std::size_t alpha1, std::size_t alpha2, const SimConfig& cfg);

Json to_json(const ExperimentReport& report, bool include_runtime = false);
ExperimentReport report_from_json(const Json& j);

/// {name}_{seed}.json
std::string report_file_name(const ExperimentReport& report);

/// Writes the report under dir and returns the file path.
std::string write_report(const std::string& dir, const ExperimentReport& report);

Json describe(const Potential& p);
Json describe(const SimConfig& cfg);

}  // namespace dunkl
