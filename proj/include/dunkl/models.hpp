#pragma once

#include "dunkl/potential.hpp"
#include "dunkl/sde.hpp"

namespace dunkl {

/// Parameters of the beta-Laguerre particle system and the B_m multiplicities
/// of its square-root process: 2 k0 = beta (delta - m + 1) - 1, 2 k1 = beta.
struct LaguerreParams {
    int m = 1;
    double beta = 1.0;
    double delta = 1.0;
    double k0 = 0.0;
    double k1 = 0.0;

    static LaguerreParams make(int m, double beta, double delta);

    /// k0 > 0 and k1 > 0, equivalently beta > 0 and delta > m - 1 + 1/beta.
    bool strong_regime() const { return k0 > 0.0 && k1 > 0.0; }
};

/// Particle form of the type-A drift: k sum_{j != i} 1 / (x_i - x_j).
Vec type_a_drift(std::span<const double> x, double k);

struct LaguerreCoefficients {
    Vec drift;
    Vec diffusion;
};

/// beta [delta + sum_{j != i} (l_i + l_j) / (l_i - l_j)] and 2 sqrt(l_i).
LaguerreCoefficients laguerre_drift(std::span<const double> lambda, const LaguerreParams& params);

/// Drift of r = sqrt(lambda) after Ito's formula:
/// k0 / r_i + k1 sum_{j != i} [1 / (r_i - r_j) + 1 / (r_i + r_j)].
Vec radial_laguerre_drift(std::span<const double> r, const LaguerreParams& params);

Vec sqrt_map(std::span<const double> lambda);
Vec square_map(std::span<const double> r);

/// The B_m potential whose radial Dunkl process is sqrt of the Laguerre
/// process (k0 on the short orbit, k1 on the long orbit). Requires k0, k1 >= 0.
Potential laguerre_to_radial(const LaguerreParams& params);

struct BesselParams {
    double dimension = 1.0;
    double index = -0.5;
};

/// Dimension 2k + 1 and index k - 1/2 of the rank-one process.
BesselParams bessel_params(double k);

/// The eigenvalue particle system in lambda coordinates: walls are the
/// gaps lambda_i - lambda_{i+1} and lambda_m, diffusion 2 sqrt(lambda_i).
class LaguerreDynamics : public Dynamics {
public:
    explicit LaguerreDynamics(const LaguerreParams& params);

    std::size_t state_dim() const override { return static_cast<std::size_t>(params_.m); }
    std::size_t noise_dim() const override { return static_cast<std::size_t>(params_.m); }
    bool drift(std::span<const double> x, std::span<const char> alive,
               std::span<double> out) const override;
    void diffuse(std::span<const double> x, std::span<const double> dw,
                 std::span<double> out) const override;

private:
    LaguerreParams params_;
};

PathRecord simulate_laguerre(std::span<const double> lambda0, const LaguerreParams& params,
                             const SimConfig& cfg, BrownianStream& stream);

}  // namespace dunkl
