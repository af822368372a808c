#include "dunkl/models.hpp"

#include <cmath>

namespace dunkl {

namespace {

void require_strictly_decreasing(std::span<const double> x, const char* what)
{
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
        if (!(x[i] > x[i + 1]))
            throw std::domain_error(std::string(what) + ": coordinates must be strictly decreasing");
}

}  // namespace

LaguerreParams LaguerreParams::make(int m, double beta, double delta)
{
    if (m < 1)
        throw std::invalid_argument("LaguerreParams: m must be >= 1");
    if (!(beta > 0.0))
        throw std::invalid_argument("LaguerreParams: beta must be > 0");
    LaguerreParams p;
    p.m = m;
    p.beta = beta;
    p.delta = delta;
    p.k0 = 0.5 * (beta * (delta - m + 1) - 1.0);
    p.k1 = 0.5 * beta;
    return p;
}

Vec type_a_drift(std::span<const double> x, double k)
{
    require_strictly_decreasing(x, "type_a_drift");
    Vec out(x.size(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j)
            if (j != i)
                out[i] += k / (x[i] - x[j]);
    return out;
}

LaguerreCoefficients laguerre_drift(std::span<const double> lambda, const LaguerreParams& params)
{
    if (lambda.size() != static_cast<std::size_t>(params.m))
        throw std::invalid_argument("laguerre_drift: expected m eigenvalues");
    require_strictly_decreasing(lambda, "laguerre_drift");
    if (!(lambda.back() > 0.0))
        throw std::domain_error("laguerre_drift: eigenvalues must be positive");
    LaguerreCoefficients c;
    c.drift.assign(lambda.size(), 0.0);
    c.diffusion.assign(lambda.size(), 0.0);
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        double s = params.delta;
        for (std::size_t j = 0; j < lambda.size(); ++j)
            if (j != i)
                s += (lambda[i] + lambda[j]) / (lambda[i] - lambda[j]);
        c.drift[i] = params.beta * s;
        c.diffusion[i] = 2.0 * std::sqrt(lambda[i]);
    }
    return c;
}

Vec radial_laguerre_drift(std::span<const double> r, const LaguerreParams& params)
{
    if (r.size() != static_cast<std::size_t>(params.m))
        throw std::invalid_argument("radial_laguerre_drift: expected m coordinates");
    require_strictly_decreasing(r, "radial_laguerre_drift");
    if (!(r.back() > 0.0))
        throw std::domain_error("radial_laguerre_drift: coordinates must be positive");
    Vec out(r.size(), 0.0);
    for (std::size_t i = 0; i < r.size(); ++i) {
        out[i] = params.k0 / r[i];
        for (std::size_t j = 0; j < r.size(); ++j)
            if (j != i)
                out[i] += params.k1 * (1.0 / (r[i] - r[j]) + 1.0 / (r[i] + r[j]));
    }
    return out;
}

Vec sqrt_map(std::span<const double> lambda)
{
    Vec r(lambda.size());
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        if (!(lambda[i] >= 0.0))
            throw std::domain_error("sqrt_map: negative eigenvalue");
        r[i] = std::sqrt(lambda[i]);
    }
    return r;
}

Vec square_map(std::span<const double> r)
{
    Vec lambda(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (!(r[i] >= 0.0))
            throw std::domain_error("square_map: negative radial coordinate");
        lambda[i] = r[i] * r[i];
    }
    return lambda;
}

Potential laguerre_to_radial(const LaguerreParams& params)
{
    if (params.k0 < 0.0)
        throw std::invalid_argument("laguerre_to_radial: k0 < 0 (delta <= m - 1 + 1/beta) is not supported");
    RootSystem rs = RootSystem::catalog(Family::B, params.m);
    Multiplicity k = Multiplicity::for_b(rs, params.k0, params.k1);
    return Potential(std::move(rs), std::move(k));
}

BesselParams bessel_params(double k)
{
    if (!(k >= 0.0))
        throw std::invalid_argument("bessel_params: k must be >= 0");
    return {2.0 * k + 1.0, k - 0.5};
}

LaguerreDynamics::LaguerreDynamics(const LaguerreParams& params) : params_(params)
{
    const auto m = static_cast<std::size_t>(params.m);
    for (std::size_t i = 0; i + 1 < m; ++i) {
        Vec n = unit(m, i);
        n[i + 1] = -1.0;
        walls_.push_back({std::move(n), 0, i});
    }
    walls_.push_back({unit(m, m - 1), 0, m - 1});
}

bool LaguerreDynamics::drift(std::span<const double> x, std::span<const char> alive,
                             std::span<double> out) const
{
    if (!alive[0]) {
        std::fill(out.begin(), out.end(), 0.0);
        return true;
    }
    const std::size_t m = x.size();
    if (!(x[m - 1] > 0.0))
        return false;
    for (std::size_t i = 0; i < m; ++i) {
        double s = params_.delta;
        for (std::size_t j = 0; j < m; ++j) {
            if (j == i)
                continue;
            const double gap = x[i] - x[j];
            if (gap == 0.0)
                return false;
            s += (x[i] + x[j]) / gap;
        }
        out[i] = params_.beta * s;
    }
    return true;
}

void LaguerreDynamics::diffuse(std::span<const double> x, std::span<const double> dw,
                               std::span<double> out) const
{
    for (std::size_t i = 0; i < x.size(); ++i)
        out[i] = 2.0 * std::sqrt(std::max(x[i], 0.0)) * dw[i];
}

PathRecord simulate_laguerre(std::span<const double> lambda0, const LaguerreParams& params,
                             const SimConfig& cfg, BrownianStream& stream)
{
    if (lambda0.size() != static_cast<std::size_t>(params.m))
        throw std::invalid_argument("simulate_laguerre: expected m eigenvalues");
    require_strictly_decreasing(lambda0, "simulate_laguerre");
    if (!(lambda0.back() > 0.0))
        throw std::domain_error("simulate_laguerre: eigenvalues must be positive");
    LaguerreDynamics dyn(params);
    return std::move(integrate(dyn, lambda0, cfg, cfg.hit_epsilon_for(lambda0), stream).front());
}

}  // namespace dunkl
