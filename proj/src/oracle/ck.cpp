#include "edgechain/oracle/ck.hpp"

#include "edgechain/errors.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace edgechain {

void DensityGrid::write_csv(std::ostream& os) const {
    os << "node,value\n";
    os.precision(17);
    for (int a = 0; a < axis.n; ++a) os << axis.node(a) << ',' << values[a] << '\n';
}

namespace {

// Density on the grid plus the points between nodes where it is not smooth.
struct GridDensity {
    std::vector<double> v;
    /// Evaluate v analytically (the first-step density) instead of interpolating.
    bool analytic = false;
    double start = 0.0;
    /// Value jumps (analytic case) or kinks (support edges) of v.
    std::vector<double> features;
};

// z* with (w − z − m(t,z)h)/√h = b_k(t,z): the point where P_i(·, w) jumps.
double step_jump(const ModelSpec& spec, double t, double w, std::size_t k) {
    const double h = spec.h(), sh = std::sqrt(h);
    auto g = [&](double z) { return (w - z - spec.drift.value(t, z) * h) / sh - spec.innovations.breakpoints_at(t, z)[k]; };
    double z0 = w - spec.drift.value(t, w) * h - sh * spec.innovations.breakpoints_at(t, w)[k];
    double z1 = z0 + 1e-3 * sh;
    double g0 = g(z0), g1 = g(z1);
    for (int it = 0; it < 50 && g1 != g0; ++it) {
        const double z2 = z1 - g1 * (z1 - z0) / (g1 - g0);
        z0 = z1;
        g0 = g1;
        z1 = z2;
        g1 = g(z1);
        if (std::abs(z1 - z0) < 1e-15 * std::max(1.0, std::abs(z1))) break;
    }
    return z1;
}

// Per cut c the piecewise trapezoid is exact up to the Euler–Maclaurin term (Δ²/12)(f'(c−) − f'(c+)),
// which is subtracted using one-sided differences.
class StepIntegrator {
  public:
    StepIntegrator(const ModelSpec& spec, const ChainAxis& axis, CellRule rule) : spec_(spec), axis_(axis), rule_(rule) {}

    double integrate(const GridDensity& d, int i, double w) const {
        const int n = axis_.n;
        double acc = 0.0;
        for (int a = 0; a < n; ++a) {
            if (d.v[a] == 0.0) continue;
            acc += axis_.weight(a) * d.v[a] * chain_step_density(spec_, i, axis_.node(a), w);
        }
        if (rule_ == CellRule::trapezoid) return acc;
        std::vector<double> cuts = d.features;
        const double t = i * spec_.h();
        const std::size_t nb = spec_.innovations.breakpoints_at(t, w).size();
        for (std::size_t k = 0; k < nb; ++k) cuts.push_back(step_jump(spec_, t, w, k));
        std::sort(cuts.begin(), cuts.end());
        std::size_t c = 0;
        while (c < cuts.size()) {
            const int cell = cell_of(cuts[c]);
            std::vector<double> inside;
            while (c < cuts.size() && cell_of(cuts[c]) == cell) inside.push_back(cuts[c++]);
            if (cell < 2 || cell >= n - 3) continue;
            acc += cell_correction(d, i, w, cell, inside);
        }
        return acc;
    }

  private:
    int cell_of(double z) const { return static_cast<int>(std::floor((z - axis_.lo) / axis_.step)); }

    bool has_kink(const GridDensity& d, int cell) const {
        const double za = axis_.node(cell), zb = axis_.node(cell + 1);
        return std::any_of(d.features.begin(), d.features.end(), [&](double f) { return f > za && f < zb; });
    }

    // v and v' on one side of the cell's cuts: analytic in the first step, otherwise the quadratic through
    // three nodes on that side (across the cell when v is smooth there).
    void v_model(const GridDensity& d, int cell, double side, double z, double& v, double& dv) const {
        if (d.analytic) {
            const double e = 1e-4 * axis_.step;
            const double zs = z + side * 1e-9 * axis_.step;
            const double f0 = chain_step_density(spec_, 0, d.start, zs);
            const double f1 = chain_step_density(spec_, 0, d.start, zs + side * e);
            const double f2 = chain_step_density(spec_, 0, d.start, zs + side * 2.0 * e);
            v = f0;
            dv = -side * (3.0 * f0 - 4.0 * f1 + f2) / (2.0 * e);
            return;
        }
        int first;
        if (has_kink(d, cell)) {
            first = side < 0 ? cell - 2 : cell + 1;
        } else {
            first = side < 0 ? cell - 1 : cell;
        }
        const double z0 = axis_.node(first), hs = axis_.step;
        const double y0 = d.v[first], y1 = d.v[first + 1], y2 = d.v[first + 2];
        const double u = (z - z0) / hs;
        v = y0 + u * (y1 - y0) + 0.5 * u * (u - 1.0) * (y2 - 2.0 * y1 + y0);
        dv = ((y1 - y0) + (u - 0.5) * (y2 - 2.0 * y1 + y0)) / hs;
    }

    // f = v·P_i(·, w) and f' at z, approached from `side`.
    void f_model(const GridDensity& d, int i, double w, int cell, double side, double z, double& f, double& df) const {
        double v = 0.0, dv = 0.0;
        v_model(d, cell, side, z, v, dv);
        const double e = 1e-4 * axis_.step;
        const double zs = z + side * 1e-9 * axis_.step;
        const double p0 = chain_step_density(spec_, i, zs, w);
        const double p1 = chain_step_density(spec_, i, zs + side * e, w);
        const double p2 = chain_step_density(spec_, i, zs + side * 2.0 * e, w);
        const double dp = -side * (3.0 * p0 - 4.0 * p1 + p2) / (2.0 * e);
        f = v * p0;
        df = dv * p0 + v * dp;
    }

    // Exact integral over the cut cell minus the plain trapezoid, with the leading Euler–Maclaurin terms of
    // the neighbouring uniform parts and of each sub-panel.
    double cell_correction(const GridDensity& d, int i, double w, int cell, const std::vector<double>& inside) const {
        const double za = axis_.node(cell), zb = axis_.node(cell + 1), hs = axis_.step;
        const double fa = d.v[cell] * chain_step_density(spec_, i, za, w);
        const double fb = d.v[cell + 1] * chain_step_density(spec_, i, zb, w);
        double f = 0.0, dfa = 0.0, dfb = 0.0;
        f_model(d, i, w, cell, -1.0, za, f, dfa);
        f_model(d, i, w, cell, 1.0, zb, f, dfb);
        // Uniform parts end at za and start at zb; their error is (hs²/12)(f'(za) − f'(zb)).
        double err = hs * hs / 12.0 * (dfa - dfb);
        double piecewise = 0.0, left = za, fl = fa, dl = dfa;
        const std::size_t m = inside.size();
        for (std::size_t k = 0; k <= m; ++k) {
            const double right = k < m ? inside[k] : zb;
            double fr = fb, dr = dfb;
            // Interior sub-panels between two cuts take the model of the side they lie on.
            if (k < m) f_model(d, i, w, cell, -1.0, right, fr, dr);
            const double L = right - left;
            piecewise += 0.5 * L * (fl + fr);
            err += L * L / 12.0 * (dr - dl);
            if (k < m) f_model(d, i, w, cell, 1.0, right, fl, dl);
            left = right;
        }
        return piecewise - 0.5 * hs * (fa + fb) - err;
    }

    const ModelSpec& spec_;
    const ChainAxis& axis_;
    CellRule rule_;
};

// Image of a support edge under one step of the chain.
double next_edge(const ModelSpec& spec, int i, double edge, std::size_t k) {
    const double h = spec.h(), t = i * h;
    return edge + spec.drift.value(t, edge) * h + std::sqrt(h) * spec.innovations.breakpoints_at(t, edge)[k];
}

GridDensity recurse(const ModelSpec& spec, int steps, double x, const ChainAxis& axis, Execution exec, CellRule rule) {
    const int n = axis.n;
    GridDensity d;
    d.v.resize(n);
    for (int b = 0; b < n; ++b) d.v[b] = chain_step_density(spec, 0, x, axis.node(b));
    std::vector<double> edges;
    if (rule == CellRule::breakpoint_corrected) {
        d.analytic = true;
        d.start = x;
        const std::size_t nb = spec.innovations.breakpoints_at(0.0, x).size();
        for (std::size_t k = 0; k < nb; ++k) edges.push_back(next_edge(spec, 0, x, k));
        d.features = edges;
    }
    StepIntegrator step(spec, axis, rule);
    std::vector<double> next(n);
    for (int i = 1; i < steps; ++i) {
#pragma omp parallel for schedule(static) if (exec == Execution::parallel)
        for (int b = 0; b < n; ++b) next[b] = step.integrate(d, i, axis.node(b));
        d.v.swap(next);
        d.analytic = false;
        // After two steps the support edge is a kink of v; later densities are C¹ there.
        for (std::size_t k = 0; k < edges.size(); ++k) edges[k] = next_edge(spec, i, edges[k], k);
        d.features = (i == 1) ? edges : std::vector<double>{};
    }
    return d;
}

DensityGrid summarize(const ModelSpec& spec, std::vector<double> v, int k, const ChainAxis& axis, double tol_mass) {
    DensityGrid g;
    g.axis = axis;
    g.step_index = k;
    const int edge = std::min(axis.n / 2, step_band(spec, axis, 8.0));
    for (int a = 0; a < axis.n; ++a) {
        const double m = axis.weight(a) * v[a];
        g.mass += m;
        if (a < edge || a >= axis.n - edge) g.boundary_mass += std::abs(m);
        g.min_value = std::min(g.min_value, v[a]);
    }
    g.values = std::move(v);
    if (g.boundary_mass > tol_mass) throw GridExtentError("chain density leaks mass through the grid boundary");
    return g;
}

void check(const ModelSpec& spec, int k, const ChainAxis& axis) {
    if (spec.dim != 1) throw CapabilityError("CK recursion is implemented for d = 1");
    if (k < 1 || k > spec.steps) throw DomainError("CK recursion needs 1 <= k <= n");
    if (axis.n < 3) throw DomainError("CK grid needs at least 3 nodes");
}

}  // namespace

DensityGrid ck_chain_density(const ModelSpec& spec, int k, double x, const ChainAxis& axis, double tol_mass,
                             Execution exec, CellRule rule) {
    check(spec, k, axis);
    return summarize(spec, recurse(spec, k, x, axis, exec, rule).v, k, axis, tol_mass);
}

std::vector<double> ck_chain_density_at(const ModelSpec& spec, int k, double x, const std::vector<double>& ys,
                                        const ChainAxis& axis, double tol_mass, Execution exec, CellRule rule) {
    check(spec, k, axis);
    std::vector<double> out(ys.size());
    if (k == 1) {
        for (std::size_t i = 0; i < ys.size(); ++i) out[i] = chain_step_density(spec, 0, x, ys[i]);
        return out;
    }
    const GridDensity d = recurse(spec, k - 1, x, axis, exec, rule);
    summarize(spec, d.v, k - 1, axis, tol_mass);
    StepIntegrator step(spec, axis, rule);
    for (std::size_t i = 0; i < ys.size(); ++i) out[i] = step.integrate(d, k - 1, ys[i]);
    return out;
}

}  // namespace edgechain
