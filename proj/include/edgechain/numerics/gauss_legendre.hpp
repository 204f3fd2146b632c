#pragma once

#include <vector>

namespace edgechain {

/// Gauss–Legendre rule on [-1, 1].
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point rule (backed by GSL's fixed-order tables; cached per n).
const GaussLegendre& gauss_legendre(int n);

/// Nodes/weights of the n-point rule mapped to [a, b].
void gauss_legendre_on(int n, double a, double b, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace edgechain
