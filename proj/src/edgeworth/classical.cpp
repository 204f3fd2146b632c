#include "edgechain/edgeworth/classical.hpp"

#include "edgechain/errors.hpp"
#include "edgechain/kernels/frozen_gaussian.hpp"

#include <cmath>
#include <numbers>

namespace edgechain {

double pi_tilde_1(const ModelSpec& spec, double s, double t, double x, double y) {
    if (!(t > s)) throw DomainError("pi_tilde_1 needs s < t");
    if (spec.innovations.gaussian) return 0.0;
    const double c3 = averaged_cumulant(spec, 3, s, t, y);
    return (t - s) * c3 / 6.0 * frozen_density_deriv(spec, 3, s, t, x, y);
}

double pi_tilde_2(const ModelSpec& spec, double s, double t, double x, double y) {
    if (!(t > s)) throw DomainError("pi_tilde_2 needs s < t");
    if (spec.innovations.gaussian) return 0.0;
    const double c3 = averaged_cumulant(spec, 3, s, t, y);
    const double c4 = averaged_cumulant(spec, 4, s, t, y);
    const double e = t - s;
    return e * c4 / 24.0 * frozen_density_deriv(spec, 4, s, t, x, y) +
           0.5 * e * e * (c3 / 6.0) * (c3 / 6.0) * frozen_density_deriv(spec, 6, s, t, x, y);
}

CumulantBasisSides cumulant_basis_sides(const ModelSpec& spec, int order, double t, double x, double u) {
    if (order != 3 && order != 4) throw UnsupportedOrderError("cumulant basis identity is checked for orders 3 and 4");
    const double a = 1.0 / std::sqrt(spec.covariance.value(t, x));
    double m[5] = {1.0, 0.0, 0.0, 0.0, 0.0};
    for (int k = 1; k <= 4; ++k) m[k] = std::pow(a, k) * innovation_moment(spec.innovations, t, x, k);
    const double c3 = m[3] - 3 * m[2] * m[1] + 2 * m[1] * m[1] * m[1];
    const double c4 = m[4] - 4 * m[3] * m[1] - 3 * m[2] * m[2] + 12 * m[2] * m[1] * m[1] - 6 * std::pow(m[1], 4);
    const double fact = order == 3 ? 6.0 : 24.0;
    const double z = a * u;
    const double phi = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
    // D^k φ(z) = (−1)^k He_k(z) φ(z).
    const double sign = (order % 2) ? -1.0 : 1.0;
    CumulantBasisSides out;
    out.lhs = (order == 3 ? c3 : c4) / fact * sign * hermite_he(order, z) * phi;
    out.rhs = spec.innovations.cumulant(order, t, x) / fact * std::pow(a, order) * sign * hermite_he(order, z) * phi;
    return out;
}

}  // namespace edgechain
