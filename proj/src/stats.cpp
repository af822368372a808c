#include "dunkl/stats.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <stdexcept>

namespace dunkl {

Interval wilson_interval(std::size_t successes, std::size_t trials, double confidence)
{
    if (trials == 0)
        return {0.0, 1.0};
    if (successes > trials)
        throw std::invalid_argument("wilson_interval: successes > trials");
    const double z = boost::math::quantile(boost::math::normal(), 0.5 + 0.5 * confidence);
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / (1.0 + z2 / n);
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

MeanEstimate t_interval(std::span<const double> samples, double confidence)
{
    MeanEstimate e;
    e.n = samples.size();
    if (e.n == 0)
        return e;
    // Welford
    double mean = 0.0, m2 = 0.0;
    std::size_t k = 0;
    for (double v : samples) {
        ++k;
        const double d = v - mean;
        mean += d / static_cast<double>(k);
        m2 += d * (v - mean);
    }
    e.mean = mean;
    if (e.n < 2) {
        e.ci = {mean, mean};
        return e;
    }
    const double var = m2 / static_cast<double>(e.n - 1);
    e.std_error = std::sqrt(var / static_cast<double>(e.n));
    const double q = boost::math::quantile(
        boost::math::students_t(static_cast<double>(e.n - 1)), 0.5 + 0.5 * confidence);
    e.ci = {mean - q * e.std_error, mean + q * e.std_error};
    return e;
}

}  // namespace dunkl
