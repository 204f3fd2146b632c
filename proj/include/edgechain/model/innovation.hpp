#pragma once

#include "edgechain/model/coefficient.hpp"
#include "edgechain/model/multi_index.hpp"

#include <complex>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace edgechain {

using Rng = std::mt19937_64;

/// Law of the innovation ξ given (t, x), in d = 1.
///
/// Builtin families are a standardized shape (mean 0, variance 1) scaled by √σ(t, x),
/// so cumulant(n) = σ^{n/2}·κ_n(shape).
struct InnovationFamily {
    std::string name;
    std::map<std::string, double> parameters;

    std::function<double(double t, double x, double z)> density;
    /// Optional; empty when the family has no closed-form characteristic function.
    std::function<std::complex<double>(double t, double x, double theta)> char_fn;
    std::function<double(double t, double x, Rng& rng)> sampler;
    /// χ_n(t, x) for 1 <= n <= 4.
    std::function<double(int order, double t, double x)> cumulant_fn;
    /// Increments where the density is not smooth (empty for smooth families).
    std::function<std::vector<double>(double t, double x)> breakpoints;

    int envelope_order = 2;
    /// Multiplier on Gaussian-scale spatial reach needed to capture the tails (1 for Gaussian tails).
    double tail_reach = 1.0;
    bool state_independent = false;
    bool gaussian = false;

    double cumulant(const MultiIndex& nu, double t, double x) const;
    double cumulant(int order, double t, double x) const;
    std::vector<double> breakpoints_at(double t, double x) const;
};

InnovationFamily gaussian_family(const Coefficient& covariance);
/// ξ = √σ·(E − 1), E standard exponential.
InnovationFamily centered_exponential_family(const Coefficient& covariance);
/// Two Gaussians of equal variance with means (1−w)δ and −wδ, weights w and 1−w.
InnovationFamily two_point_mixture_family(const Coefficient& covariance, double separation, double weight);
/// Student t with 5 degrees of freedom scaled to unit variance; tails ~|z|^{-6}.
InnovationFamily student5_family(const Coefficient& covariance);
/// Two-point mixture whose weight w(x) = base + swing·tanh(rate·x) depends on the state.
InnovationFamily modulated_mixture_family(const Coefficient& covariance, double separation, double base,
                                          double swing, double rate);

/// Build a builtin family by name; unknown names or parameters raise ConfigError.
InnovationFamily make_family(const std::string& name, const std::map<std::string, double>& params,
                             const Coefficient& covariance);

}  // namespace edgechain
