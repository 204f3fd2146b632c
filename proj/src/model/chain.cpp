#include "edgechain/model/chain.hpp"

#include "edgechain/errors.hpp"

#include <algorithm>
#include <cmath>

namespace edgechain {

double chain_step_density(const ModelSpec& spec, int i, double z, double w) {
    const double h = spec.h(), t = i * h, sh = std::sqrt(h);
    return spec.innovations.density(t, z, (w - z - spec.drift.value(t, z) * h) / sh) / sh;
}

double frozen_step_density(const ModelSpec& spec, int i, double z, double w, double freeze) {
    const double h = spec.h(), t = i * h, sh = std::sqrt(h);
    return spec.innovations.density(t, freeze, (w - z - spec.drift.value(t, freeze) * h) / sh) / sh;
}

std::vector<double> ChainAxis::nodes() const {
    std::vector<double> z(n);
    for (int a = 0; a < n; ++a) z[a] = node(a);
    return z;
}

ChainAxis make_chain_axis(const ModelSpec& spec, const std::vector<double>& points, double nodes_per_sd,
                          double radius_mult) {
    if (points.empty()) throw DomainError("chain axis needs at least one point");
    if (!(nodes_per_sd > 0) || !(radius_mult > 0)) throw DomainError("chain axis parameters must be positive");
    const auto [pmin, pmax] = std::minmax_element(points.begin(), points.end());
    const double tail = spec.innovations.tail_reach;
    const double diffusion_reach = tail * radius_mult * std::sqrt(spec.ellipticity.upper * spec.horizon);
    const double extent = std::max(std::abs(*pmin), std::abs(*pmax)) + diffusion_reach;
    const double reach = diffusion_reach + spec.drift.abs_bound(extent) * spec.horizon;
    ChainAxis axis;
    axis.step = std::sqrt(spec.ellipticity.lower * spec.h()) / nodes_per_sd;
    const double lo = *pmin - reach, hi = *pmax + reach;
    axis.n = static_cast<int>(std::ceil((hi - lo) / axis.step)) + 1;
    axis.lo = 0.5 * (lo + hi) - 0.5 * (axis.n - 1) * axis.step;
    if (axis.n > 200000) throw ResolutionError("chain axis would exceed 200000 nodes");
    return axis;
}

int step_band(const ModelSpec& spec, const ChainAxis& axis, double radius_mult) {
    const double h = spec.h();
    const double tail = spec.innovations.tail_reach;
    const double drift = spec.drift.abs_bound(std::max(std::abs(axis.lo), std::abs(axis.hi()))) * h;
    const double reach = tail * radius_mult * std::sqrt(spec.ellipticity.upper * h) + drift;
    return static_cast<int>(std::ceil(reach / axis.step)) + 1;
}

}  // namespace edgechain
