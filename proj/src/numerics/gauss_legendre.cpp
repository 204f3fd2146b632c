#include "edgechain/numerics/gauss_legendre.hpp"

#include "edgechain/errors.hpp"

#include <gsl/gsl_integration.h>

#include <map>
#include <memory>
#include <mutex>

namespace edgechain {

const GaussLegendre& gauss_legendre(int n) {
    if (n < 1) throw DomainError("Gauss-Legendre order must be positive");
    static std::mutex mu;
    static std::map<int, std::unique_ptr<GaussLegendre>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[n];
    if (!slot) {
        auto rule = std::make_unique<GaussLegendre>();
        gsl_integration_glfixed_table* table = gsl_integration_glfixed_table_alloc(static_cast<size_t>(n));
        rule->nodes.resize(static_cast<std::size_t>(n));
        rule->weights.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            gsl_integration_glfixed_point(-1.0, 1.0, static_cast<size_t>(i), &rule->nodes[static_cast<std::size_t>(i)],
                                          &rule->weights[static_cast<std::size_t>(i)], table);
        }
        gsl_integration_glfixed_table_free(table);
        slot = std::move(rule);
    }
    return *slot;
}

void gauss_legendre_on(int n, double a, double b, std::vector<double>& nodes, std::vector<double>& weights) {
    const GaussLegendre& g = gauss_legendre(n);
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    nodes.resize(g.nodes.size());
    weights.resize(g.nodes.size());
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        nodes[i] = mid + half * g.nodes[i];
        weights[i] = half * g.weights[i];
    }
}

}  // namespace edgechain
