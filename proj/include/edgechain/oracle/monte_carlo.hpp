#pragma once

#include "edgechain/model/model_spec.hpp"
#include "edgechain/parallel.hpp"

#include <cstdint>
#include <vector>

namespace edgechain {

struct MonteCarloEstimate {
    std::vector<double> values;
    /// Plug-in standard errors of the kernel averages.
    std::vector<double> std_errors;
    double bandwidth = 0.0;
    long paths = 0;
    std::uint64_t seed = 0;
};

/// Seed of path `index` derived from the run seed by SplitMix64.
std::uint64_t path_seed(std::uint64_t seed, std::uint64_t index);

/// Simulates X_{i+1} = X_i + m(ih, X_i)h + √h·ξ_{i+1} for k steps from x and forms a Gaussian kernel
/// density estimate at `points`. A non-positive bandwidth selects 0.8 × Silverman's rule.
/// Each path has its own generator and the kernel sums run in path order, so the result does not
/// depend on the worker count.
MonteCarloEstimate mc_chain_density(const ModelSpec& spec, int k, double x, const std::vector<double>& points,
                                    long paths, double bandwidth, std::uint64_t seed,
                                    Execution exec = Execution::parallel);

/// Transition density of dY = −θY dt + dW.
double ou_exact_density(double theta, double s, double t, double x, double y);

}  // namespace edgechain
