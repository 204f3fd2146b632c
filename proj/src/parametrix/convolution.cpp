#include "edgechain/parametrix/convolution.hpp"

#include "edgechain/errors.hpp"

#include <algorithm>
#include <cmath>

namespace edgechain {

namespace {

double trapezoid(const Section& left, const Section& right, const SpaceWindow& w, std::vector<double>& z,
                 std::vector<double>& a, std::vector<double>& b) {
    const int n = w.intervals + 1;
    z.resize(n);
    a.resize(n);
    b.resize(n);
    const double dz = w.step();
    for (int i = 0; i < n; ++i) z[i] = w.lo + i * dz;
    left.values(z.data(), a.data(), n);
    right.values(z.data(), b.data(), n);
    double acc = 0.5 * (a[0] * b[0] + a[n - 1] * b[n - 1]);
    for (int i = 1; i < n - 1; ++i) acc += a[i] * b[i];
    return acc * dz;
}

void require_order(double s, double t) {
    if (!(t > s)) throw DomainError("convolution needs s < t");
}

}  // namespace

double time_space_convolve_raw(const SpaceTimeKernel& f, const SpaceTimeKernel& g, double s, double t, double x,
                               double y, const QuadratureSpec& q) {
    require_order(s, t);
    if (f.identically_zero() || g.identically_zero()) return 0.0;
    const TimeNodes tn = time_nodes(s, t, q);
    std::vector<double> z, a, b;
    double acc = 0.0;
    for (std::size_t i = 0; i < tn.u.size(); ++i) {
        const double u = tn.u[i];
        const SpaceWindow w = convolution_window(f, g, s, u, t, x, y, q);
        const SectionPtr ls = f.left_section(s, u, x);
        const SectionPtr rs = g.right_section(u, t, y);
        acc += tn.w[i] * trapezoid(*ls, *rs, w, z, a, b);
    }
    return acc;
}

double time_space_convolve(const KernelPtr& f, const KernelPtr& g, double s, double t, double x, double y,
                           const QuadratureSpec& q) {
    q.validate();
    const double coarse = time_space_convolve_raw(*f, *g, s, t, x, y, q);
    if (!q.refinement_check) return coarse;
    const double fine = time_space_convolve_raw(*f, *g, s, t, x, y, q.refined());
    if (std::abs(coarse - fine) > 10.0 * q.tol_quad * std::max(1.0, std::abs(fine))) {
        throw AccuracyError("convolution did not converge under refinement", coarse, fine);
    }
    return fine;
}

void convolve_batch_left_points(const SpaceTimeKernel& f, const SpaceTimeKernel& g, double s, double t,
                                const std::vector<double>& xs, double y, const QuadratureSpec& q,
                                std::vector<double>& out) {
    require_order(s, t);
    out.assign(xs.size(), 0.0);
    if (f.identically_zero() || g.identically_zero()) return;
    const TimeNodes tn = time_nodes(s, t, q);
    std::vector<double> z, a, b;
    for (std::size_t i = 0; i < tn.u.size(); ++i) {
        const double u = tn.u[i];
        const SectionPtr rs = g.right_section(u, t, y);
        for (std::size_t p = 0; p < xs.size(); ++p) {
            const SpaceWindow w = convolution_window(f, g, s, u, t, xs[p], y, q);
            const SectionPtr ls = f.left_section(s, u, xs[p]);
            out[p] += tn.w[i] * trapezoid(*ls, *rs, w, z, a, b);
        }
    }
}

void convolve_batch_right_points(const SpaceTimeKernel& f, const SpaceTimeKernel& g, double s, double t, double x,
                                 const std::vector<double>& ys, const QuadratureSpec& q, std::vector<double>& out) {
    require_order(s, t);
    out.assign(ys.size(), 0.0);
    if (f.identically_zero() || g.identically_zero()) return;
    const TimeNodes tn = time_nodes(s, t, q);
    std::vector<double> z, a, b;
    for (std::size_t i = 0; i < tn.u.size(); ++i) {
        const double u = tn.u[i];
        const SectionPtr ls = f.left_section(s, u, x);
        for (std::size_t p = 0; p < ys.size(); ++p) {
            const SpaceWindow w = convolution_window(f, g, s, u, t, x, ys[p], q);
            const SectionPtr rs = g.right_section(u, t, ys[p]);
            out[p] += tn.w[i] * trapezoid(*ls, *rs, w, z, a, b);
        }
    }
}

double discrete_convolve(const KernelPtr& f, const KernelPtr& g, int j, int k, double x, double y, double h,
                         const QuadratureSpec& q, DiscreteBoundary boundary) {
    if (k <= j) throw DomainError("discrete convolution needs j < k");
    if (!(h > 0)) throw DomainError("discrete convolution needs h > 0");
    q.validate();
    if (f->identically_zero() || g->identically_zero()) return 0.0;
    const double s = j * h, t = k * h;
    double acc = 0.0;
    if (boundary == DiscreteBoundary::dirac) acc += h * g->eval(s, t, x, y);
    std::vector<double> z, a, b;
    for (int i = j + 1; i < k; ++i) {
        const double u = i * h;
        const SpaceWindow w = convolution_window(*f, *g, s, u, t, x, y, q);
        const SectionPtr ls = f->left_section(s, u, x);
        const SectionPtr rs = g->right_section(u, t, y);
        acc += h * trapezoid(*ls, *rs, w, z, a, b);
    }
    return acc;
}

}  // namespace edgechain
