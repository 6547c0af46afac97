#pragma once

#include <cstddef>
#include <span>

namespace phc {

struct PowerLawFit {
    double slope = 0.0;
    double intercept = 0.0;  // ln y at x = 1
    double r_squared = 0.0;
    std::size_t points = 0;
};

/// Least squares of ln y against ln x. Points with non-positive x or y are
/// skipped. Throws std::invalid_argument with fewer than two usable points.
PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y);

}  // namespace phc
