#include "edgechain/parametrix/series.hpp"

#include "edgechain/errors.hpp"
#include "edgechain/kernels/frozen_gaussian.hpp"
#include "edgechain/kernels/operators.hpp"
#include "edgechain/parametrix/convolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace edgechain {

double EnvelopeFit::bound(int r, double displacement) const {
    if (c1 <= 0.0 || rho <= 0.0) return 0.0;
    const double var = c * rho * rho;
    const double logphi = -0.5 * std::log(2.0 * std::numbers::pi * var) - 0.5 * displacement * displacement / var;
    return std::exp((r + 1) * std::log(c1) + r * std::log(rho) - std::lgamma(1.0 + 0.5 * r) + logphi);
}

double EnvelopeFit::tail(int r, double displacement) const {
    double acc = 0.0;
    for (int m = r + 1; m <= r + 400; ++m) {
        const double b = bound(m, displacement);
        acc += b;
        if (b <= 1e-17 * acc) break;
    }
    return acc;
}

EnvelopeFit fit_envelope(const ModelPtr& spec, double s, double t, double y, const QuadratureSpec& q) {
    if (!(t > s)) throw DomainError("envelope fit needs s < t");
    EnvelopeFit fit;
    fit.rho = std::sqrt(t - s);
    const int n = 21;
    const double half = 5.0 * fit.rho * std::sqrt(spec->ellipticity.upper);
    std::vector<double> xs(n), disp(n), t0(n);
    for (int i = 0; i < n; ++i) {
        disp[i] = -half + 2.0 * half * i / (n - 1);
        xs[i] = y - disp[i];
        t0[i] = frozen_density(*spec, s, t, xs[i], y);
    }
    const KernelPtr ptilde = frozen_density_kernel(spec);
    const KernelPtr h = kernel_H(spec);
    std::vector<double> t1(n, 0.0);
    if (!h->identically_zero()) convolve_batch_left_points(*ptilde, *h, s, t, xs, y, q, t1);

    double best_c = 1.0, best_c1 = 1e300;
    for (int step = 0; step <= 12; ++step) {
        EnvelopeFit trial;
        trial.c = 1.0 + 0.25 * step;
        trial.rho = fit.rho;
        trial.c1 = 1.0;
        double c1 = 0.0;
        for (int i = 0; i < n; ++i) {
            // bound(r) with c1 = 1 is ρ^r φ / Γ(1 + r/2).
            c1 = std::max(c1, std::abs(t0[i]) / trial.bound(0, disp[i]));
            c1 = std::max(c1, std::sqrt(std::abs(t1[i]) / trial.bound(1, disp[i])));
        }
        if (c1 < best_c1) {
            best_c1 = c1;
            best_c = trial.c;
        }
    }
    fit.c = best_c;
    fit.c1 = best_c1;
    return fit;
}

FieldGeometry field_geometry(const ModelSpec& spec, FieldAnchor anchor, double time, double point, double extent,
                             double alpha, const QuadratureSpec& q) {
    FieldGeometry g;
    g.anchor = anchor;
    g.anchor_time = time;
    g.anchor_point = point;
    g.extent = extent;
    g.scale = std::sqrt(spec.ellipticity.upper);
    g.drift = spec.drift.value(time, point);
    g.alpha = alpha;
    g.n_tau = q.field_time_nodes;
    g.n_zeta = q.field_space_nodes;
    g.zeta_radius = q.space_radius_mult;
    return g;
}

BackwardChain build_backward_chain(const ModelPtr& spec, double s0, double t, double y, int rmax,
                                   const QuadratureSpec& q, Execution exec) {
    if (!(t > s0)) throw DomainError("backward chain needs s0 < t");
    BackwardChain chain{s0, t, y, {}};
    if (rmax < 1) return chain;
    const KernelPtr h = kernel_H(spec);
    chain.phi.push_back(h);
    const FieldGeometry geo = field_geometry(*spec, FieldAnchor::terminal, t, y, t - s0, 1.0, q);
    for (int r = 2; r <= rmax; ++r) {
        const KernelPtr prev = chain.phi.back();
        if (h->identically_zero()) {
            chain.phi.push_back(zero_kernel());
            continue;
        }
        auto row = [&](double u, const std::vector<double>& z, std::vector<double>& out) {
            convolve_batch_left_points(*h, *prev, u, t, z, y, q, out);
        };
        chain.phi.push_back(ScaledField::build(geo, row, spec.get(), exec));
    }
    return chain;
}

ForwardChain build_forward_chain(const ModelPtr& spec, double s, double t1, double x, int rmax,
                                 const QuadratureSpec& q, Execution exec) {
    if (!(t1 > s)) throw DomainError("forward chain needs s < t1");
    ForwardChain chain{s, t1, x, {}};
    const KernelPtr ptilde = frozen_density_kernel(spec);
    const KernelPtr h = kernel_H(spec);
    const FieldGeometry geo = field_geometry(*spec, FieldAnchor::initial, s, x, t1 - s, 1.0, q);
    for (int r = 1; r <= rmax; ++r) {
        if (h->identically_zero()) {
            chain.terms.push_back(zero_kernel());
            continue;
        }
        const KernelPtr left = r == 1 ? ptilde : chain.terms.back();
        auto row = [&](double u, const std::vector<double>& z, std::vector<double>& out) {
            convolve_batch_right_points(*left, *h, s, u, x, z, q, out);
        };
        chain.terms.push_back(ScaledField::build(geo, row, spec.get(), exec));
    }
    return chain;
}

FieldPtr backward_density_table(const ModelPtr& spec, const BackwardChain& chain, const QuadratureSpec& q,
                                Execution exec) {
    const KernelPtr ptilde = frozen_density_kernel(spec);
    std::vector<std::pair<double, KernelPtr>> parts;
    for (const auto& k : chain.phi) {
        if (!k->identically_zero()) parts.emplace_back(1.0, k);
    }
    const KernelPtr correction = parts.empty() ? zero_kernel() : sum_kernel(parts);
    const double t = chain.t, y = chain.y;
    const FieldGeometry geo = field_geometry(*spec, FieldAnchor::terminal, t, y, t - chain.s0, 1.0, q);
    auto row = [&](double u, const std::vector<double>& z, std::vector<double>& out) {
        convolve_batch_left_points(*ptilde, *correction, u, t, z, y, q, out);
        for (std::size_t j = 0; j < z.size(); ++j) out[j] += frozen_density(*spec, u, t, z[j], y);
    };
    return ScaledField::build(geo, row, spec.get(), exec);
}

KernelPtr forward_density_kernel(const ModelPtr& spec, const ForwardChain& chain) {
    std::vector<std::pair<double, KernelPtr>> parts{{1.0, frozen_density_kernel(spec)}};
    for (const auto& k : chain.terms) {
        if (!k->identically_zero()) parts.emplace_back(1.0, k);
    }
    return sum_kernel(parts);
}

namespace {

std::vector<SeriesResult> parametrix_p_once(const ModelPtr& spec, double s, double t, const std::vector<double>& xs,
                                            double y, const QuadratureSpec& q, Execution exec) {
    std::vector<SeriesResult> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double p0 = frozen_density(*spec, s, t, xs[i], y);
        out[i].terms.push_back(p0);
        out[i].value = p0;
    }
    const KernelPtr h = kernel_H(spec);
    if (h->identically_zero() || xs.empty()) return out;

    const EnvelopeFit fit = fit_envelope(spec, s, t, y, q);
    int r_top = 0;
    std::vector<int> r_used(xs.size(), q.series_rmax);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double disp = y - xs[i];
        if (q.series_tail_tol > 0.0) {
            r_used[i] = -1;
            for (int r = 0; r <= q.series_rmax; ++r) {
                if (fit.bound(r, disp) < q.series_tail_tol) {
                    r_used[i] = r;
                    break;
                }
            }
            if (r_used[i] < 0) {
                throw TruncationError("parametrix series envelope above tolerance at series_rmax",
                                      fit.tail(q.series_rmax, disp));
            }
        }
        out[i].r_used = r_used[i];
        out[i].tail_bound = fit.tail(r_used[i], disp);
        r_top = std::max(r_top, r_used[i]);
    }
    if (r_top == 0) return out;

    const BackwardChain chain = build_backward_chain(spec, s, t, y, r_top, q, exec);
    const KernelPtr ptilde = frozen_density_kernel(spec);
    std::vector<double> terms;
    for (int r = 1; r <= r_top; ++r) {
        convolve_batch_left_points(*ptilde, *chain.phi[r - 1], s, t, xs, y, q, terms);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (r > r_used[i]) continue;
            out[i].terms.push_back(terms[i]);
            out[i].value += terms[i];
        }
    }
    return out;
}

}  // namespace

std::vector<SeriesResult> parametrix_p_batch(const ModelPtr& spec, double s, double t, const std::vector<double>& xs,
                                             double y, const QuadratureSpec& q, Execution exec) {
    q.validate();
    if (!(t > s)) throw DomainError("parametrix_p needs s < t");
    if (t > spec->horizon * (1.0 + 1e-12)) throw DomainError("parametrix_p needs t <= T");
    std::vector<SeriesResult> res = parametrix_p_once(spec, s, t, xs, y, q, exec);
    if (q.refinement_check) {
        const std::vector<SeriesResult> fine = parametrix_p_once(spec, s, t, xs, y, q.refined(), exec);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (std::abs(res[i].value - fine[i].value) > 10.0 * q.tol_quad * std::max(1.0, std::abs(fine[i].value))) {
                throw AccuracyError("parametrix series did not converge under refinement", res[i].value, fine[i].value);
            }
        }
    }
    return res;
}

SeriesResult parametrix_p(const ModelPtr& spec, double s, double t, double x, double y, const QuadratureSpec& q,
                          Execution exec) {
    return parametrix_p_batch(spec, s, t, {x}, y, q, exec).front();
}

}  // namespace edgechain
