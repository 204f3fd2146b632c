#include "doctest.h"

#include "edgechain/errors.hpp"
#include "edgechain/kernels/frozen_gaussian.hpp"
#include "edgechain/kernels/operators.hpp"

#include <cmath>
#include <numbers>

using namespace edgechain;

namespace {

ModelPtr make_model(Coefficient drift, Coefficient cov) {
    auto m = std::make_shared<ModelSpec>();
    m->drift = drift;
    m->covariance = cov;
    m->innovations = gaussian_family(cov);
    return m;
}

// Richardson-extrapolated central difference of order k for a scalar function.
template <class F>
double fd_deriv(F f, int k, double x, double e) {
    auto stencil = [&](double h) {
        double acc = 0.0, b = 1.0;
        for (int j = 0; j <= k; ++j) {
            acc += ((j % 2) ? -1.0 : 1.0) * b * f(x + (0.5 * k - j) * h);
            b = b * (k - j) / (j + 1);
        }
        return acc / std::pow(h, k);
    };
    return (4.0 * stencil(e / 2) - stencil(e)) / 3.0;
}

}  // namespace

TEST_CASE("frozen density examples") {
    const ModelSpec spec;
    CHECK(frozen_density(spec, 0, 1, 0, 0) == doctest::Approx(0.3989423).epsilon(1e-7));
    CHECK(frozen_density(spec, 0, 0.25, 0, 0.5) == doctest::Approx(0.4839414).epsilon(1e-7));
    CHECK(frozen_density_deriv(spec, MultiIndex{1}, 0, 1, 0.3, 0.3) == 0.0);
    CHECK(frozen_density_deriv(spec, MultiIndex{2}, 0, 1, 0, 0) == doctest::Approx(-0.3989423).epsilon(1e-7));
    CHECK_THROWS_AS(frozen_density_deriv(spec, 7, 0, 1, 0, 0), UnsupportedOrderError);
    ModelSpec bad;
    bad.covariance = Coefficient::sine_x(0.0, 1.0, 1.0);
    CHECK_THROWS_AS(frozen_density(bad, 0, 1, 0.5, 0.0), ConditioningError);
}

TEST_CASE("analytic derivatives of the frozen density match finite differences") {
    const ModelPtr m = make_model(Coefficient::sine_x(0.1, 0.3, 1.2, 0.2), Coefficient::tanh_x(1.0, 0.25, 0.8, 0.3));
    for (double dt : {0.01, 0.2, 0.9}) {
        for (double x : {-0.6, 0.0, 0.45}) {
            for (double y : {-0.3, 0.2, 0.9}) {
                for (int k = 1; k <= 4; ++k) {
                    // first-order central difference of the next-lower derivative
                    auto f = [&](double xx) { return frozen_density_deriv(*m, k - 1, 0.05, 0.05 + dt, xx, y); };
                    const double exact = frozen_density_deriv(*m, k, 0.05, 0.05 + dt, x, y);
                    const double fd = fd_deriv(f, 1, x, std::sqrt(dt) * 0.01);
                    const double scale = frozen_density(*m, 0.05, 0.05 + dt, x, x) * std::pow(dt, -0.5 * k);
                    CHECK(std::abs(exact - fd) < 1e-6 * scale);
                }
            }
        }
    }
}

TEST_CASE("odd derivatives vanish at the frozen mean") {
    const ModelPtr m = make_model(Coefficient::constant(0.4), Coefficient::tanh_x(1.0, 0.2, 1.0));
    const double y = 0.7, s = 0.1, t = 0.6;
    const FrozenCoefficients c = integrated_coeffs(*m, s, t, y);
    const double x = y - c.mean_shift;
    for (int k : {1, 3, 5}) CHECK(std::abs(frozen_density_deriv(*m, k, s, t, x, y)) < 1e-12);
}

TEST_CASE("frozen density mass: exact for y-independent coefficients, near one otherwise") {
    auto mass = [](const ModelSpec& spec, double s, double t, double x) {
        double acc = 0.0;
        const int n = 6000;
        const double lo = x - 12, hi = x + 12, h = (hi - lo) / n;
        for (int i = 0; i <= n; ++i) acc += (i == 0 || i == n ? 0.5 : 1.0) * frozen_density(spec, s, t, x, lo + i * h);
        return acc * h;
    };
    const ModelPtr flat = make_model(Coefficient::affine_t(0.3, 0.1), Coefficient::affine_t(1.0, 0.5));
    CHECK(mass(*flat, 0.0, 0.8, 0.2) == doctest::Approx(1.0).epsilon(1e-12));
    const ModelPtr curved = make_model(Coefficient::sine_x(0, 0.3, 1), Coefficient::tanh_x(1.0, 0.3, 1.0));
    const double e_long = std::abs(mass(*curved, 0.0, 1.0, 0.2) - 1.0);
    const double e_short = std::abs(mass(*curved, 0.0, 0.05, 0.2) - 1.0);
    CHECK(e_long < 0.5);
    CHECK(e_short < e_long);
}

TEST_CASE("kernel sections agree with pointwise evaluation") {
    const ModelPtr m = make_model(Coefficient::sine_x(0.1, 0.3, 1.2), Coefficient::tanh_x(1.0, 0.25, 0.8, 0.3));
    const KernelPtr p = frozen_density_kernel(m);
    const KernelPtr H = kernel_H(m);
    for (const KernelPtr& k : {p, H}) {
        const auto r = k->right_section(0.2, 0.7, 0.4);
        const auto l = k->left_section(0.2, 0.7, -0.1);
        for (double z : {-0.5, 0.1, 0.6}) {
            CHECK(r->value(z) == doctest::Approx(k->eval(0.2, 0.7, z, 0.4)).epsilon(1e-13));
            for (int d = 1; d <= 3; ++d) CHECK(r->deriv(d, z) == doctest::Approx(k->deriv(d, 0.2, 0.7, z, 0.4)).epsilon(1e-12));
            CHECK(l->value(z) == doctest::Approx(k->eval(0.2, 0.7, -0.1, z)).epsilon(1e-13));
        }
    }
}

TEST_CASE("operator examples") {
    const ModelPtr flat = make_model(Coefficient::constant(0.0), Coefficient::constant(1.0));
    const KernelPtr p = frozen_density_kernel(flat);
    const KernelPtr Lp = apply_operator(OperatorKind::L, flat, p);
    CHECK(Lp->eval(0, 1, 0, 0) == doctest::Approx(-0.1994711).epsilon(1e-7));

    const ModelPtr xind = make_model(Coefficient::affine_t(0.3, 0.2), Coefficient::affine_t(1.0, 0.4));
    const KernelPtr q = frozen_density_kernel(xind);
    const KernelPtr L = apply_operator(OperatorKind::L, xind, q);
    const KernelPtr Lt = apply_operator(OperatorKind::L_tilde, xind, q);
    const KernelPtr Lst = apply_operator(OperatorKind::L_star, xind, q);
    for (double x : {-0.4, 0.3}) {
        CHECK(L->eval(0.1, 0.6, x, 0.2) - Lt->eval(0.1, 0.6, x, 0.2) == doctest::Approx(0.0).scale(1e-14));
        CHECK(Lst->eval(0.1, 0.6, x, 0.2) == L->eval(0.1, 0.6, x, 0.2));
    }
    const ModelPtr homog = make_model(Coefficient::sine_x(0.1, 0.2, 1.0), Coefficient::tanh_x(1.0, 0.3, 1.0));
    const KernelPtr Lprime = apply_operator(OperatorKind::L_prime, homog, frozen_density_kernel(homog));
    CHECK(Lprime->identically_zero());
    CHECK(Lprime->eval(0, 0.5, 0.2, 0.1) == 0.0);
    // L' with a time-dependent covariance: ½ slope ∂²p̃.
    const ModelPtr tdep = make_model(Coefficient::constant(0.0), Coefficient::tanh_x(1.0, 0.2, 1.0, 0.5));
    const KernelPtr pt = frozen_density_kernel(tdep);
    const KernelPtr Lp2 = apply_operator(OperatorKind::L_prime, tdep, pt);
    CHECK(Lp2->eval(0, 0.5, 0.2, 0.1) == doctest::Approx(0.25 * pt->deriv(2, 0, 0.5, 0.2, 0.1)).epsilon(1e-14));
    const KernelPtr LLH = apply_operator(OperatorKind::L, flat, apply_operator(OperatorKind::L, flat, kernel_H(flat)));
    CHECK_THROWS_AS(apply_operator(OperatorKind::L, flat, LLH), CapabilityError);
}

TEST_CASE("operator derivatives follow the Leibniz rule") {
    const ModelPtr m = make_model(Coefficient::sine_x(0.1, 0.3, 1.2), Coefficient::tanh_x(1.0, 0.25, 0.8));
    const KernelPtr L = apply_operator(OperatorKind::L, m, frozen_density_kernel(m));
    for (int k = 1; k <= 2; ++k) {
        auto f = [&](double x) { return L->eval(0, 0.5, x, 0.3); };
        CHECK(L->deriv(k, 0, 0.5, -0.2, 0.3) == doctest::Approx(fd_deriv(f, k, -0.2, 1e-2)).epsilon(1e-6));
    }
    const auto sec = L->right_section(0, 0.5, 0.3);
    CHECK(sec->deriv(1, -0.2) == doctest::Approx(L->deriv(1, 0, 0.5, -0.2, 0.3)).epsilon(1e-12));
}

TEST_CASE("(L*^2 - L^2) matches a nested finite-difference oracle") {
    auto check_against_oracle = [](ModelPtr m, double s, double t, double x, double y) {
        const KernelPtr p = frozen_density_kernel(m);
        const KernelPtr diff = operator_square_diff(m, p);
        const double e = 2e-3;
        auto f1 = [&](double xx) { return p->deriv(1, s, t, xx, y); };
        auto f2 = [&](double xx) { return p->deriv(2, s, t, xx, y); };
        auto Lf = [&](double xx) { return 0.5 * m->covariance.value(s, xx) * f2(xx) + m->drift.value(s, xx) * f1(xx); };
        const double sig = m->covariance.value(s, x), mu = m->drift.value(s, x);
        auto Lfrozen = [&](double xx) { return 0.5 * sig * f2(xx) + mu * f1(xx); };
        const double LL = 0.5 * sig * fd_deriv(Lf, 2, x, e) + mu * fd_deriv(Lf, 1, x, e);
        const double LsLs = 0.5 * sig * fd_deriv(Lfrozen, 2, x, e) + mu * fd_deriv(Lfrozen, 1, x, e);
        const double scale = std::abs(p->deriv(4, s, t, x, y)) + 1.0;
        CHECK(std::abs(diff->eval(s, t, x, y) - (LsLs - LL)) < 1e-6 * scale);
    };
    const ModelPtr constant = make_model(Coefficient::constant(0.2), Coefficient::constant(1.3));
    CHECK(operator_square_diff(constant, frozen_density_kernel(constant))->eval(0, 1, 0.2, 0.1) == 0.0);
    // synthetic probe σ ≡ 1, m(x) = x
    check_against_oracle(make_model(Coefficient::ou_linear(-1.0), Coefficient::constant(1.0)), 0.0, 0.5, 0.3, -0.2);
    // OU model
    check_against_oracle(make_model(Coefficient::ou_linear(1.0), Coefficient::constant(1.0)), 0.0, 0.5, 0.4, 0.1);
    // both coefficients curved
    check_against_oracle(make_model(Coefficient::sine_x(0.1, 0.3, 1.1), Coefficient::tanh_x(1.0, 0.3, 0.9)), 0.0, 0.7,
                         -0.3, 0.5);
    // σ ≡ 1, m = x reduces to −(f″ + x f′)
    const ModelPtr lin = make_model(Coefficient::ou_linear(-1.0), Coefficient::constant(1.0));
    const KernelPtr p = frozen_density_kernel(lin);
    const double x = 0.3, y = -0.2;
    CHECK(operator_square_diff(lin, p)->eval(0, 0.5, x, y) ==
          doctest::Approx(-(p->deriv(2, 0, 0.5, x, y) + x * p->deriv(1, 0, 0.5, x, y))).epsilon(1e-13));
}

TEST_CASE("kernel H examples") {
    const ModelPtr m = make_model(Coefficient::sine_x(0.1, 0.3, 1.2), Coefficient::tanh_x(1.0, 0.25, 0.8));
    const KernelPtr H = kernel_H(m);
    for (double y : {-0.5, 0.0, 0.8}) CHECK(H->eval(0.1, 0.5, y, y) == 0.0);
    const ModelPtr xind = make_model(Coefficient::affine_t(0.1, 0.2), Coefficient::affine_t(1.0, 0.3));
    CHECK(kernel_H(xind)->eval(0, 1, 0.5, -0.3) == 0.0);
    CHECK(kernel_H(xind)->identically_zero());
    // σ(x) = 1 + 0.1 tanh(x), m ≡ 0: H(0,1,1,0) = ½(σ(1) − σ(0))·He₂(−1)φ(−1) = 0.
    const ModelPtr tanh_model = make_model(Coefficient::constant(0.0), Coefficient::tanh_x(1.0, 0.1, 1.0));
    const KernelPtr Ht = kernel_H(tanh_model);
    CHECK(std::abs(Ht->eval(0, 1, 1, 0)) < 1e-16);
    // finite-difference cross-check of the same value
    auto p = [&](double x) { return frozen_density(*tanh_model, 0, 1, x, 0.0); };
    const double fd = 0.5 * (tanh_model->covariance.value(0, 1) - tanh_model->covariance.value(0, 0)) * fd_deriv(p, 2, 1.0, 1e-2);
    CHECK(std::abs(fd) < 1e-9);
    // derivatives of H against finite differences
    for (int k = 1; k <= 4; ++k) {
        auto f = [&](double x) { return H->eval(0.1, 0.6, x, 0.2); };
        CHECK(H->deriv(k, 0.1, 0.6, 0.5, 0.2) == doctest::Approx(fd_deriv(f, k, 0.5, 2e-2)).epsilon(1e-5).scale(1.0));
    }
}

TEST_CASE("H is enveloped by C1/ρ·φ_{C,ρ} with constants stable under grid refinement") {
    const ModelPtr m = make_model(Coefficient::sine_x(0.1, 0.3, 1.2), Coefficient::tanh_x(1.0, 0.25, 0.8));
    const KernelPtr H = kernel_H(m);
    auto fit = [&](int nr, int nd) {
        // for each C on a ladder, the smallest C1 that works; keep the C with minimal C1
        double best = INFINITY;
        for (double C = 1.0; C <= 4.0; C += 0.25) {
            double c1 = 0.0;
            for (int i = 1; i <= nr; ++i) {
                const double rho = std::sqrt(0.9 * i / nr);
                for (int j = -nd; j <= nd; ++j) {
                    const double d = 4.0 * rho * j / nd;
                    const double phi = std::exp(-d * d / (2 * C * rho * rho)) / std::sqrt(2 * std::numbers::pi * C) / rho;
                    c1 = std::max(c1, std::abs(H->eval(0.0, rho * rho, 0.3 - d, 0.3)) * rho / phi);
                }
            }
            best = std::min(best, c1);
        }
        return best;
    };
    const double c_coarse = fit(6, 10), c_mid = fit(12, 20), c_fine = fit(24, 40);
    CHECK(std::isfinite(c_fine));
    CHECK(c_fine > 0.0);
    CHECK(std::abs(c_fine - c_mid) < 0.05 * c_fine);
    CHECK(std::abs(c_mid - c_coarse) < 0.1 * c_fine);
}
