#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace dunkl {

using Vec = std::vector<double>;

inline double dot(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

inline double norm2(std::span<const double> a) { return dot(a, a); }

inline double norm(std::span<const double> a) { return std::sqrt(norm2(a)); }

// y += s * x
inline void axpy(double s, std::span<const double> x, std::span<double> y)
{
    for (std::size_t i = 0; i < x.size(); ++i)
        y[i] += s * x[i];
}

inline Vec scaled(std::span<const double> a, double s)
{
    Vec out(a.begin(), a.end());
    for (auto& v : out)
        v *= s;
    return out;
}

inline Vec negated(std::span<const double> a) { return scaled(a, -1.0); }

inline double max_abs_diff(std::span<const double> a, std::span<const double> b)
{
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

/// Coordinatewise comparison within an absolute tolerance.
inline bool approx_equal(std::span<const double> a, std::span<const double> b, double tol)
{
    return a.size() == b.size() && max_abs_diff(a, b) <= tol;
}

/// Unit coordinate vector e_i (0-based) in R^m.
inline Vec unit(std::size_t m, std::size_t i)
{
    Vec e(m, 0.0);
    e[i] = 1.0;
    return e;
}

}  // namespace dunkl
