#include "dunkl/potential.hpp"

#include <string>

namespace dunkl {

namespace {
constexpr double kPairTol = 1e-12;
}

Potential::Potential(RootSystem system, Multiplicity k) : system_(std::move(system)), k_(std::move(k))
{
    if (k_.orbit_count() != system_.orbit_count())
        throw std::invalid_argument("multiplicity has " + std::to_string(k_.orbit_count()) +
                                    " values but the root system has " +
                                    std::to_string(system_.orbit_count()) + " orbits");
    const std::size_t m = system_.dim();
    pos_flat_.reserve(system_.positive_count() * m);
    for (std::size_t p = 0; p < system_.positive_count(); ++p) {
        const double kp = k_.of_root(system_, system_.positive_indices()[p]);
        k_pos_.push_back(kp);
        gamma_ += kp;
        const Vec& a = system_.positive(p);
        pos_flat_.insert(pos_flat_.end(), a.begin(), a.end());
    }
}

void Potential::require_interior(std::span<const double> x, const char* what) const
{
    if (x.size() != dim())
        throw std::invalid_argument(std::string(what) + ": dimension mismatch");
    for (std::size_t p = 0; p < system_.positive_count(); ++p)
        if (!(dot(system_.positive(p), x) > 0.0))
            throw std::domain_error(std::string(what) + ": point is not in the open chamber");
}

double Potential::phi(std::span<const double> x) const
{
    require_interior(x, "phi");
    double s = 0.0;
    for (std::size_t p = 0; p < system_.positive_count(); ++p)
        s += k_pos_[p] * theta(dot(system_.positive(p), x));
    return s;
}

Vec Potential::drift(std::span<const double> x) const
{
    require_interior(x, "drift");
    Vec out(dim());
    drift_into(x, out);
    return out;
}

bool Potential::drift_into(std::span<const double> x, std::span<double> out) const
{
    const std::size_t m = dim();
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t p = 0; p < k_pos_.size(); ++p) {
        std::span<const double> a(pos_flat_.data() + p * m, m);
        const double margin = dot(a, x);
        if (!(margin > 0.0))
            return false;
        if (k_pos_[p] != 0.0)
            axpy(k_pos_[p] / margin, a, out);
    }
    return true;
}

double Potential::apply_generator(const TestFunction& u, std::span<const double> x) const
{
    require_interior(x, "apply_generator");
    const Vec g = u.gradient(x);
    double s = 0.5 * u.laplacian(x);
    for (std::size_t p = 0; p < system_.positive_count(); ++p) {
        const Vec& a = system_.positive(p);
        s += k_pos_[p] * dot(a, g) / dot(a, x);
    }
    return s;
}

SimpleRootSplit Potential::simple_root_decomposition(std::size_t j, std::span<const double> x) const
{
    if (j >= system_.rank())
        throw std::invalid_argument("simple_root_decomposition: not a simple root position");
    require_interior(x, "simple_root_decomposition");
    const std::size_t root0 = system_.simple_indices()[j];
    const Vec& a0 = system_.root(root0);
    const double n0 = norm2(a0);
    const double margin0 = dot(a0, x);

    SimpleRootSplit out;
    out.bessel_term = k_.of_root(system_, root0) * n0 / margin0;
    for (std::size_t p = 0; p < system_.positive_count(); ++p) {
        const std::size_t idx = system_.positive_indices()[p];
        if (idx == root0)
            continue;
        const Vec& a = system_.root(idx);
        const double pairing = dot(a, a0);
        if (pairing <= kPairTol)
            continue;
        // sigma_0 permutes R+ \ {alpha0} and flips the sign of the pairing.
        const Vec partner = reflect(a0, a);
        const auto pidx = system_.find(partner);
        if (!pidx || !system_.positive_position(*pidx))
            throw std::logic_error("reflected root is not a positive root");
        out.remainder -= k_pos_[p] * 2.0 * pairing * pairing * margin0 /
                         (n0 * dot(a, x) * dot(partner, x));
    }
    return out;
}

}  // namespace dunkl
