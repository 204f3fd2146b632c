#include "edgechain/parametrix/quadrature.hpp"

#include "edgechain/errors.hpp"
#include "edgechain/numerics/gauss_legendre.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace edgechain {

void QuadratureSpec::validate() const {
    if (!(space_radius_mult > 0)) throw DomainError("space_radius_mult must be positive");
    if (space_nodes < 16) throw DomainError("space_nodes must be at least 16");
    if (time_nodes < 8) throw DomainError("time_nodes must be at least 8");
    if (!(tol_quad > 0)) throw DomainError("tol_quad must be positive");
    if (series_rmax < 0) throw DomainError("series_rmax must be non-negative");
    if (series_tail_tol < 0) throw DomainError("series_tail_tol must be non-negative");
    if (field_time_nodes < 4 || field_space_nodes < 8) throw DomainError("field tables are too coarse");
    if (!(chain_nodes_per_sd >= 1)) throw DomainError("chain_nodes_per_sd must be at least 1");
    if (!(chain_radius_mult > 0)) throw DomainError("chain_radius_mult must be positive");
    if (fourier_max_log2 < 8 || fourier_max_log2 > 28) throw DomainError("fourier_max_log2 must be in [8, 28]");
}

QuadratureSpec QuadratureSpec::refined() const {
    QuadratureSpec r = *this;
    r.space_nodes *= 2;
    r.time_nodes *= 2;
    r.field_time_nodes += field_time_nodes / 2;
    r.field_space_nodes += field_space_nodes / 2;
    r.refinement_check = false;
    return r;
}

std::string QuadratureSpec::describe() const {
    std::ostringstream os;
    os << "space_radius_mult=" << space_radius_mult << " space_nodes=" << space_nodes
       << " time_rule=" << (time_rule == TimeRule::midpoint ? "midpoint" : "sqrt_substitution")
       << " time_nodes=" << time_nodes << " tol_quad=" << tol_quad << " series_rmax=" << series_rmax
       << " series_tail_tol=" << series_tail_tol << " field_time_nodes=" << field_time_nodes
       << " field_space_nodes=" << field_space_nodes;
    return os.str();
}

TimeNodes time_nodes(double s, double t, const QuadratureSpec& q) {
    if (!(t > s)) throw DomainError("time rule needs s < t");
    TimeNodes out;
    const int n = q.time_nodes;
    if (q.time_rule == TimeRule::midpoint) {
        const double dt = (t - s) / n;
        for (int i = 0; i < n; ++i) {
            out.u.push_back(s + (i + 0.5) * dt);
            out.w.push_back(dt);
        }
        return out;
    }
    // Each half [s, c] and [c, t] is mapped by u = s + v² (resp. t − v²), v ∈ [0, √((t−s)/2)].
    const int half = std::max(4, n / 2);
    const double vmax = std::sqrt(0.5 * (t - s));
    std::vector<double> v, wv;
    gauss_legendre_on(half, 0.0, vmax, v, wv);
    for (int i = 0; i < half; ++i) {
        out.u.push_back(s + v[i] * v[i]);
        out.w.push_back(2.0 * v[i] * wv[i]);
    }
    for (int i = half - 1; i >= 0; --i) {
        out.u.push_back(t - v[i] * v[i]);
        out.w.push_back(2.0 * v[i] * wv[i]);
    }
    return out;
}

namespace {

const ModelSpec& default_footprint_model() {
    static const ModelSpec spec{};
    return spec;
}

const ModelSpec& footprint_model(const SpaceTimeKernel& f, const SpaceTimeKernel& g) {
    if (const ModelSpec* m = f.model()) return *m;
    if (const ModelSpec* m = g.model()) return *m;
    return default_footprint_model();
}

}  // namespace

SpaceWindow convolution_window(const SpaceTimeKernel& f, const SpaceTimeKernel& g, double s, double u, double t,
                               double x, double y, const QuadratureSpec& q) {
    const bool left = f.localization() == Localization::gaussian;
    const bool right = g.localization() == Localization::gaussian;
    if (!left && !right) throw CapabilityError("convolution needs at least one localized factor");
    const ModelSpec& spec = footprint_model(f, g);
    const double lo = spec.ellipticity.lower, hi = spec.ellipticity.upper;
    const double a = u - s, b = t - u;
    const double z = q.space_radius_mult;

    const double xs[2] = {x, x + spec.drift.value(s, x) * a};
    const double ys[2] = {y, y - spec.drift.integral(u, t, y)};
    double c_lo = 0.0, c_hi = 0.0, sd = 0.0;
    if (left && right) {
        sd = std::sqrt(hi * a * b / (a + b));
        const double ratios[2] = {lo * a / (lo * a + hi * b), hi * a / (hi * a + lo * b)};
        c_lo = 1e300;
        c_hi = -1e300;
        for (double xe : xs) {
            for (double ye : ys) {
                for (double r : ratios) {
                    const double c = xe + r * (ye - xe);
                    c_lo = std::min(c_lo, c);
                    c_hi = std::max(c_hi, c);
                }
            }
        }
    } else if (left) {
        sd = std::sqrt(hi * a);
        c_lo = std::min(xs[0], xs[1]);
        c_hi = std::max(xs[0], xs[1]);
    } else {
        sd = std::sqrt(hi * b);
        c_lo = std::min(ys[0], ys[1]);
        c_hi = std::max(ys[0], ys[1]);
    }
    SpaceWindow w;
    w.lo = c_lo - z * sd;
    w.hi = c_hi + z * sd;
    const double base = 2.0 * z * sd;
    w.intervals = std::max(q.space_nodes, static_cast<int>(std::ceil(q.space_nodes * (w.hi - w.lo) / base)));
    return w;
}

}  // namespace edgechain
