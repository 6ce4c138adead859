#pragma once

#include <span>

namespace first {

struct LinearFit {
    double slope = 0;
    double intercept = 0;
    double r_squared = 0;
};

/// Ordinary least squares of y on x. Needs at least two distinct x values.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

}  // namespace first
