#include "edgechain/oracle/monte_carlo.hpp"

#include "edgechain/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace edgechain {

std::uint64_t path_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

MonteCarloEstimate mc_chain_density(const ModelSpec& spec, int k, double x, const std::vector<double>& points,
                                    long paths, double bandwidth, std::uint64_t seed, Execution exec) {
    if (spec.dim != 1) throw CapabilityError("Monte Carlo oracle is implemented for d = 1");
    if (k < 1) throw DomainError("Monte Carlo oracle needs k >= 1");
    if (paths < 10000) throw DomainError("Monte Carlo oracle needs at least 10^4 paths");
    if (!spec.innovations.sampler) throw CapabilityError("innovation family has no sampler");
    const double h = spec.h();
    const double sh = std::sqrt(h);
    std::vector<double> end(paths);
    const bool par = exec == Execution::parallel;
#pragma omp parallel for schedule(static) if (par)
    for (long p = 0; p < paths; ++p) {
        Rng rng(path_seed(seed, static_cast<std::uint64_t>(p)));
        double z = x;
        for (int i = 0; i < k; ++i) {
            const double ti = i * h;
            const double xi = spec.innovations.sampler(ti, z, rng);
            z = z + spec.drift.value(ti, z) * h + sh * xi;
        }
        end[p] = z;
    }

    MonteCarloEstimate est;
    est.paths = paths;
    est.seed = seed;
    if (bandwidth <= 0.0) {
        double mean = 0.0;
        for (double v : end) mean += v;
        mean /= paths;
        double var = 0.0;
        for (double v : end) var += (v - mean) * (v - mean);
        var /= paths - 1;
        bandwidth = 0.8 * 1.06 * std::sqrt(var) * std::pow(static_cast<double>(paths), -0.2);
    }
    est.bandwidth = bandwidth;
    const std::size_t n = points.size();
    est.values.assign(n, 0.0);
    est.std_errors.assign(n, 0.0);
    const double norm = 1.0 / (bandwidth * std::sqrt(2.0 * std::numbers::pi));
#pragma omp parallel for schedule(static) if (par)
    for (std::size_t j = 0; j < n; ++j) {
        double s1 = 0.0, s2 = 0.0;
        for (long p = 0; p < paths; ++p) {
            const double a = (points[j] - end[p]) / bandwidth;
            const double kv = norm * std::exp(-0.5 * a * a);
            s1 += kv;
            s2 += kv * kv;
        }
        const double mean = s1 / paths;
        const double var = std::max(0.0, s2 / paths - mean * mean);
        est.values[j] = mean;
        est.std_errors[j] = std::sqrt(var / paths);
    }
    return est;
}

double ou_exact_density(double theta, double s, double t, double x, double y) {
    if (!(t > s)) throw DomainError("OU density needs s < t");
    if (!(theta > 0.0)) throw DomainError("OU density needs theta > 0");
    const double e = t - s;
    const double mean = x * std::exp(-theta * e);
    const double var = -std::expm1(-2.0 * theta * e) / (2.0 * theta);
    const double d = y - mean;
    return std::exp(-0.5 * d * d / var) / std::sqrt(2.0 * std::numbers::pi * var);
}

}  // namespace edgechain
