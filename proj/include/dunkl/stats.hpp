#pragma once

#include <cstddef>
#include <span>

namespace dunkl {

struct Interval {
    double low = 0.0;
    double high = 0.0;

    bool contains(double v) const { return low <= v && v <= high; }
};

/// Wilson score interval for a binomial proportion.
Interval wilson_interval(std::size_t successes, std::size_t trials, double confidence = 0.95);

struct MeanEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    Interval ci;
    std::size_t n = 0;
};

/// Sample mean with a Student-t confidence interval.
MeanEstimate t_interval(std::span<const double> samples, double confidence = 0.95);

}  // namespace dunkl
