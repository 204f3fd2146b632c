#include "edgechain/parametrix/chain.hpp"

#include "edgechain/errors.hpp"
#include "edgechain/model/chain.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>

namespace edgechain {

namespace {

std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

void check_indices(const ModelSpec& spec, int j, int k) {
    if (spec.dim != 1) throw CapabilityError("frozen chain densities are implemented for d = 1");
    if (j < 0 || k <= j) throw DomainError("frozen chain needs 0 <= j < k");
    if (k > spec.steps) throw DomainError("frozen chain needs k <= n");
}

double tail_factor(const ModelSpec& spec) { return spec.innovations.tail_reach; }

int grid_index(double time, double h) {
    const double r = time / h;
    const long i = std::lround(r);
    if (std::abs(r - static_cast<double>(i)) > 1e-9 * std::max(1.0, std::abs(r))) {
        throw DomainError("chain kernels are defined on grid times only");
    }
    return static_cast<int>(i);
}

}  // namespace

double frozen_chain_density_fourier(const ModelSpec& spec, int j, int k, double x, double y,
                                    const QuadratureSpec& q) {
    check_indices(spec, j, k);
    if (!spec.innovations.char_fn) throw CapabilityError("innovation family has no characteristic function");
    if (k - j == 1) return frozen_step_density(spec, j, x, y, y);
    const double h = spec.h(), sh = std::sqrt(h);
    double mu = 0.0, var = 0.0;
    for (int i = j; i < k; ++i) {
        mu += spec.drift.value(i * h, y) * h;
        var += spec.covariance.value(i * h, y) * h;
    }
    if (!(var > 0)) throw ConditioningError("frozen chain covariance is not positive");
    const double sd = std::sqrt(var);
    const double u0 = y - x - mu;
    const double reach = sd * (spec.envelope_order() >= 2 ? 24.0 : 80.0);
    const double period = 2.0 * (reach + std::abs(u0));
    const auto& cf = spec.innovations.char_fn;
    auto phi = [&](double theta) {
        std::complex<double> p = 1.0;
        for (int i = j; i < k; ++i) p *= cf(i * h, y, sh * theta);
        return p;
    };

    const double two_max = std::ldexp(1.0, q.fourier_max_log2);
    const double theta_cap = std::numbers::pi * two_max / period;
    double theta = 4.0 / sd;
    while (theta < theta_cap && std::max(std::abs(phi(theta)), std::abs(phi(1.3 * theta))) > 1e-15) theta *= 2.0;
    if (theta >= theta_cap) {
        theta = theta_cap;
        if (std::abs(phi(theta)) > 1e-9) {
            throw ResolutionError("characteristic function does not decay within the Fourier grid");
        }
    }
    long m = 1024;
    while (m < period * theta / std::numbers::pi) m *= 2;
    m = std::min<long>(m, static_cast<long>(two_max));
    const double du = period / m, dtheta = 2.0 * std::numbers::pi / period;
    const double u_first = u0 - 0.5 * m * du;

    const long nc = m / 2 + 1;
    fftw_complex* in = fftw_alloc_complex(nc);
    double* out = fftw_alloc_real(m);
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        plan = fftw_plan_dft_c2r_1d(static_cast<int>(m), in, out, FFTW_ESTIMATE);
    }
    for (long i = 0; i < nc - 1; ++i) {
        const double th = i * dtheta;
        const std::complex<double> v = std::conj(phi(th) * std::polar(1.0, -th * u_first));
        in[i][0] = v.real();
        in[i][1] = v.imag();
    }
    in[nc - 1][0] = 0.0;
    in[nc - 1][1] = 0.0;
    fftw_execute(plan);
    double negative = 0.0;
    for (long i = 0; i < m; ++i) {
        out[i] /= period;
        if (out[i] < 0) negative -= out[i] * du;
    }
    const double value = out[m / 2];
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    fftw_free(in);
    fftw_free(out);
    if (negative > q.tol_quad) throw ResolutionError("Fourier inversion shows negative mass (aliasing)");
    return value;
}

double frozen_chain_density_grid(const ModelSpec& spec, int j, int k, double x, double y, const QuadratureSpec& q) {
    check_indices(spec, j, k);
    if (k - j == 1) return frozen_step_density(spec, j, x, y, y);
    const double h = spec.h();
    double min_sd = 1e300;
    for (int i = j; i < k; ++i) min_sd = std::min(min_sd, std::sqrt(spec.covariance.value(i * h, y) * h));
    const double step = min_sd / (4.0 * q.chain_nodes_per_sd);
    auto band = [&](int i) {
        const double reach = tail_factor(spec) * q.space_radius_mult * std::sqrt(spec.covariance.value(i * h, y) * h) +
                             std::abs(spec.drift.value(i * h, y)) * h;
        return static_cast<int>(std::ceil(reach / step)) + 1;
    };
    // f holds the density of the increment after the steps so far, on nodes a·step, a ∈ [−width, width].
    int width = band(j);
    std::vector<double> f(2 * width + 1);
    for (int a = -width; a <= width; ++a) f[a + width] = frozen_step_density(spec, j, 0.0, a * step, y);
    for (int i = j + 1; i < k - 1; ++i) {
        const int b = band(i);
        std::vector<double> g(2 * b + 1);
        for (int d = -b; d <= b; ++d) g[d + b] = frozen_step_density(spec, i, 0.0, d * step, y);
        const int nw = width + b;
        std::vector<double> next(2 * nw + 1, 0.0);
        for (int a = -nw; a <= nw; ++a) {
            double acc = 0.0;
            const int lo = std::max(-width, a - b), hi = std::min(width, a + b);
            for (int c = lo; c <= hi; ++c) acc += f[c + width] * g[a - c + b];
            next[a + nw] = acc * step;
        }
        f.swap(next);
        width = nw;
    }
    const double target = y - x;
    double acc = 0.0;
    for (int a = -width; a <= width; ++a) acc += f[a + width] * frozen_step_density(spec, k - 1, a * step, target, y);
    return acc * step;
}

double frozen_chain_density(const ModelSpec& spec, int j, int k, double x, double y, const QuadratureSpec& q) {
    check_indices(spec, j, k);
    if (k - j == 1) return frozen_step_density(spec, j, x, y, y);
    if (spec.innovations.char_fn) return frozen_chain_density_fourier(spec, j, k, x, y, q);
    return frozen_chain_density_grid(spec, j, k, x, y, q);
}

namespace {

class FrozenChainKernel final : public SpaceTimeKernel {
  public:
    FrozenChainKernel(ModelPtr spec, const QuadratureSpec& q) : spec_(std::move(spec)), q_(q) {}
    double eval(double s, double t, double x, double y) const override {
        const double h = spec_->h();
        return frozen_chain_density(*spec_, grid_index(s, h), grid_index(t, h), x, y, q_);
    }
    int max_deriv_order() const override { return 0; }
    bool dirac_at_zero_elapsed() const override { return true; }
    const ModelSpec* model() const override { return spec_.get(); }

  private:
    ModelPtr spec_;
    QuadratureSpec q_;
};

class ChainHKernel final : public SpaceTimeKernel {
  public:
    ChainHKernel(ModelPtr spec, const QuadratureSpec& q) : spec_(std::move(spec)), q_(q) {}
    double eval(double s, double t, double x, double y) const override {
        const ModelSpec& spec = *spec_;
        const double h = spec.h();
        const int j = grid_index(s, h), k = grid_index(t, h);
        if (k <= j) throw DomainError("H_h needs j < k");
        if (x == y) return 0.0;
        if (k == j + 1) return (chain_step_density(spec, j, x, y) - frozen_step_density(spec, j, x, y, y)) / h;
        const double sigma_hi = spec.ellipticity.upper;
        const double reach = tail_factor(spec) * q_.space_radius_mult * std::sqrt(sigma_hi * h);
        const double c1 = x + spec.drift.value(j * h, x) * h, c2 = x + spec.drift.value(j * h, y) * h;
        const double lo = std::min(c1, c2) - reach, hi = std::max(c1, c2) + reach;
        const int intervals = 4 * q_.space_nodes;
        const double dz = (hi - lo) / intervals;
        double acc = 0.0;
        for (int a = 0; a <= intervals; ++a) {
            const double z = lo + a * dz;
            const double diff = chain_step_density(spec, j, x, z) - frozen_step_density(spec, j, x, z, y);
            if (diff == 0.0) continue;
            const double w = (a == 0 || a == intervals) ? 0.5 : 1.0;
            acc += w * diff * frozen_chain_density(spec, j + 1, k, z, y, q_);
        }
        return acc * dz / h;
    }
    int max_deriv_order() const override { return 0; }
    const ModelSpec* model() const override { return spec_.get(); }
    bool identically_zero() const override {
        return spec_->innovations.state_independent && spec_->drift.state_independent();
    }

  private:
    ModelPtr spec_;
    QuadratureSpec q_;
};

}  // namespace

KernelPtr frozen_chain_kernel(ModelPtr spec, const QuadratureSpec& q) {
    return std::make_shared<FrozenChainKernel>(std::move(spec), q);
}

KernelPtr kernel_H_h(ModelPtr spec, const QuadratureSpec& q) {
    q.validate();
    return std::make_shared<ChainHKernel>(std::move(spec), q);
}

}  // namespace edgechain
