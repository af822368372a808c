#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dunkl/potential.hpp"
#include "dunkl/rng.hpp"

namespace dunkl {

struct SimConfig {
    double dt = 1e-3;
    double horizon = 1.0;
    /// Wall-margin threshold for declaring a hit; unset means
    /// 1e-6 * (1 + |x0|).
    std::optional<double> hit_epsilon;
    /// Maximum number of step halvings below dt.
    int substep_max = 40;
    /// Largest fraction of a wall margin the drift may remove in one substep.
    double clip_fraction = 0.5;
    std::uint64_t master_seed = 0;
    std::size_t n_paths = 1000;
    /// Record a state every record_stride base steps.
    std::size_t record_stride = 10;

    void validate() const;
    double hit_epsilon_for(std::span<const double> x0) const;

    bool operator==(const SimConfig&) const = default;
};

struct PathRecord {
    std::size_t dim = 0;
    std::vector<double> times;
    /// Row-major snapshots, times.size() x dim.
    std::vector<double> states;
    /// Smallest hitting-wall margin of each snapshot.
    std::vector<double> row_margins;
    bool hit = false;
    std::optional<double> hit_time;
    /// Position in the simple list of the wall that was hit.
    std::optional<std::size_t> hit_root;
    /// Smallest hitting-wall margin seen at any substep.
    double min_margin = 0.0;
    std::size_t substeps_used = 0;
    bool step_failure = false;
    bool boundary_start_failure = false;

    std::size_t size() const { return times.size(); }
    std::span<const double> state(std::size_t i) const
    {
        return {states.data() + i * dim, dim};
    }
    Vec final_state() const;
    double final_time() const { return times.back(); }
    bool failed() const { return step_failure || boundary_start_failure; }
};

/// A diffusion on a state space cut out by linear walls <n, x> >= 0.
///
/// The state may be split into independent groups that stop separately
/// (one group per coupled process). Labelled walls are hitting walls; the
/// others only constrain the drift step size.
class Dynamics {
public:
    struct Wall {
        Vec normal;
        std::size_t group = 0;
        std::optional<std::size_t> label;
    };

    virtual ~Dynamics() = default;

    virtual std::size_t state_dim() const = 0;
    virtual std::size_t noise_dim() const = 0;
    virtual std::size_t groups() const { return 1; }
    /// Half-open coordinate range [first, second) of a group.
    virtual std::pair<std::size_t, std::size_t> group_range(std::size_t) const
    {
        return {0, state_dim()};
    }

    /// Drift of the live groups. Returns false if it is undefined at x.
    virtual bool drift(std::span<const double> x, std::span<const char> alive,
                       std::span<double> out) const = 0;
    /// State increment produced by the noise increment dw.
    virtual void diffuse(std::span<const double> x, std::span<const double> dw,
                         std::span<double> out) const = 0;

    const std::vector<Wall>& walls() const { return walls_; }

protected:
    std::vector<Wall> walls_;
};

/// dX = dB + drift(X) dt for a potential; walls are the positive roots,
/// hitting walls the simple ones.
class DunklDynamics : public Dynamics {
public:
    explicit DunklDynamics(const Potential& potential);

    std::size_t state_dim() const override { return p_.dim(); }
    std::size_t noise_dim() const override { return p_.dim(); }
    bool drift(std::span<const double> x, std::span<const char> alive,
               std::span<double> out) const override;
    void diffuse(std::span<const double> x, std::span<const double> dw,
                 std::span<double> out) const override;

private:
    const Potential& p_;
};

/// dY = scale dW + k0 scale^2 / Y dt: a Bessel process of dimension 2 k0 + 1
/// run on the clock scale^2 t.
class BesselDynamics : public Dynamics {
public:
    BesselDynamics(double k0, double scale);

    std::size_t state_dim() const override { return 1; }
    std::size_t noise_dim() const override { return 1; }
    bool drift(std::span<const double> x, std::span<const char> alive,
               std::span<double> out) const override;
    void diffuse(std::span<const double> x, std::span<const double> dw,
                 std::span<double> out) const override;

private:
    double k0_;
    double scale_;
};

/// The pair (X, Y) where X is the radial Dunkl process and Y the Bessel
/// comparison process for the simple root alpha0, both driven by the same
/// Brownian motion: dY = <alpha0, dB> + k(alpha0) |alpha0|^2 / Y dt.
class CoupledDynamics : public Dynamics {
public:
    CoupledDynamics(const Potential& potential, std::size_t simple_position);

    std::size_t state_dim() const override { return p_.dim() + 1; }
    std::size_t noise_dim() const override { return p_.dim(); }
    std::size_t groups() const override { return 2; }
    std::pair<std::size_t, std::size_t> group_range(std::size_t g) const override;
    bool drift(std::span<const double> x, std::span<const char> alive,
               std::span<double> out) const override;
    void diffuse(std::span<const double> x, std::span<const double> dw,
                 std::span<double> out) const override;

private:
    const Potential& p_;
    Vec alpha0_;
    double bessel_coeff_;
};

/// Integrates a Dynamics with Euler-Maruyama and dyadic substepping.
///
/// A substep of length h is halved (its Brownian increment split by a
/// Brownian-bridge draw) while the drift displacement along some wall normal
/// exceeds clip_fraction of that wall's margin in either direction. Hitting
/// walls are also refined while the proposal ends within hit_epsilon and
/// sqrt(h) still exceeds hit_epsilon, or while it keeps less than
/// 1 - clip_fraction of the margin. Exceeding substep_max halvings under the
/// drift rule is a step failure.
std::vector<PathRecord> integrate(const Dynamics& dynamics, std::span<const double> x0,
                                  const SimConfig& cfg, double hit_epsilon,
                                  BrownianStream& stream);

enum class StepStatus { Ok, Hit, Failure };

struct StepOutcome {
    Vec state;
    StepStatus status = StepStatus::Ok;
    std::size_t substeps = 0;
    std::optional<std::size_t> hit_root;
    double elapsed = 0.0;
};

/// One base step of length dt driven by the increment dW; further Gaussian
/// draws for substeps come from the stream.
StepOutcome step(const Potential& p, std::span<const double> x, std::span<const double> dW,
                 double dt, const SimConfig& cfg, BrownianStream& stream,
                 std::optional<double> hit_epsilon = std::nullopt);

PathRecord simulate_path(std::span<const double> x0, const Potential& p, const SimConfig& cfg,
                         BrownianStream& stream);

PathRecord simulate_bessel(double y0, double k0, double scale, const SimConfig& cfg,
                           BrownianStream& stream);

struct CoupledPaths {
    PathRecord x;
    PathRecord y;
    Vec alpha0;
};

/// Runs X from x0 and Y from y0 >= <alpha0, x0> on one grid with shared noise.
CoupledPaths simulate_coupled_comparison(std::span<const double> x0,
                                         std::size_t simple_position, double y0,
                                         const Potential& p, const SimConfig& cfg,
                                         BrownianStream& stream);

}  // namespace dunkl
