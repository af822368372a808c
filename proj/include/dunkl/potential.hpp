#pragma once

#include <functional>
#include <span>

#include "dunkl/root_system.hpp"

namespace dunkl {

/// theta(s) = -ln s and its derivative; Phi = sum_alpha k(alpha) theta(<alpha, x>).
inline double theta(double s) { return -std::log(s); }
inline double theta_prime(double s) { return -1.0 / s; }

/// A smooth function supplied with analytic first and second derivatives.
struct TestFunction {
    std::function<double(std::span<const double>)> value;
    std::function<Vec(std::span<const double>)> gradient;
    std::function<double(std::span<const double>)> laplacian;
};

/// Split of <drift(x), alpha0> for a simple root alpha0 into the Bessel part
/// k(alpha0) |alpha0|^2 / <alpha0, x> and the remainder F(x) <= 0.
struct SimpleRootSplit {
    double bessel_term = 0.0;
    double remainder = 0.0;
};

/// The logarithmic potential Phi(x) = -sum_{alpha in R+} k(alpha) ln <alpha, x>
/// on the open Weyl chamber, and the operators derived from it.
class Potential {
public:
    Potential(RootSystem system, Multiplicity k);

    const RootSystem& system() const { return system_; }
    const Multiplicity& multiplicity() const { return k_; }
    std::size_t dim() const { return system_.dim(); }

    /// k(alpha) for the p-th positive root.
    double positive_weight(std::size_t p) const { return k_pos_[p]; }

    /// Sum of k(alpha) over the positive roots.
    double total_multiplicity() const { return gamma_; }

    double phi(std::span<const double> x) const;

    /// -grad Phi(x) = sum_{alpha in R+} k(alpha) alpha / <alpha, x>.
    Vec drift(std::span<const double> x) const;

    /// Allocation-free drift; returns false instead of throwing when some
    /// margin is not strictly positive.
    bool drift_into(std::span<const double> x, std::span<double> out) const;

    /// (1/2) Lap u + sum k(alpha) <alpha, grad u> / <alpha, x>.
    double apply_generator(const TestFunction& u, std::span<const double> x) const;

    /// Decomposition along the simple root at position j of the simple list.
    /// The remainder is evaluated by pairing alpha with sigma_0(alpha), never
    /// by subtraction.
    SimpleRootSplit simple_root_decomposition(std::size_t simple_position,
                                              std::span<const double> x) const;

private:
    void require_interior(std::span<const double> x, const char* what) const;

    RootSystem system_;
    Multiplicity k_;
    std::vector<double> k_pos_;
    // Positive roots flattened, positive_count x dim.
    std::vector<double> pos_flat_;
    double gamma_ = 0.0;
};

}  // namespace dunkl
