#pragma once

#include "edgechain/model/model_spec.hpp"

#include <vector>

namespace edgechain {

/// One-step transition density of the chain at step i: h^{-1/2}·q(ih, z, (w − z − m(ih,z)h)/√h).
double chain_step_density(const ModelSpec& spec, int i, double z, double w);

/// Same step with drift and innovation law frozen at `freeze`.
double frozen_step_density(const ModelSpec& spec, int i, double z, double w, double freeze);

/// Uniform spatial grid with trapezoid weights.
struct ChainAxis {
    double lo = 0.0;
    double step = 1.0;
    int n = 0;

    double node(int a) const { return lo + a * step; }
    double weight(int a) const { return (a == 0 || a == n - 1) ? 0.5 * step : step; }
    double hi() const { return node(n - 1); }
    std::vector<double> nodes() const;
};

/// Grid spacing √(σ_*·h)/nodes_per_sd covering the probe points plus
/// radius_mult·√(σ*·T) and the largest drift displacement on each side.
ChainAxis make_chain_axis(const ModelSpec& spec, const std::vector<double>& points, double nodes_per_sd,
                          double radius_mult);

/// Half-width, in grid steps, beyond which a one-step density is treated as zero.
int step_band(const ModelSpec& spec, const ChainAxis& axis, double radius_mult);

}  // namespace edgechain
