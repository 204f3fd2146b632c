#pragma once

#include <utility>
#include <vector>

namespace edgechain {

struct RateFit {
    double slope = 0.0;
    double stderr_slope = 0.0;
    double intercept = 0.0;
};

/// Least-squares slope of log(error) against log(h), with its standard error.
/// Needs at least 3 rows with h > 0 and error > 0 (DomainError otherwise).
RateFit fit_rate(const std::vector<std::pair<double, double>>& rows);

}  // namespace edgechain
