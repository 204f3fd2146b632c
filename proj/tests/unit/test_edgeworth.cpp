#include "doctest.h"

#include "edgechain/edgeworth/classical.hpp"
#include "edgechain/edgeworth/corrections.hpp"
#include "edgechain/edgeworth/expansion.hpp"
#include "edgechain/errors.hpp"
#include "edgechain/kernels/frozen_gaussian.hpp"
#include "edgechain/kernels/operators.hpp"
#include "edgechain/parametrix/convolution.hpp"

#include <gsl/gsl_sf_hermite.h>

#include <cmath>
#include <cstring>
#include <memory>
#include <numbers>

using namespace edgechain;

namespace {

ModelPtr gaussian_flat() { return std::make_shared<ModelSpec>(); }

ModelPtr exponential_flat(double slope_t = 0.0) {
    auto m = std::make_shared<ModelSpec>();
    m->covariance = Coefficient::affine_t(1.0, slope_t);
    m->innovations = centered_exponential_family(m->covariance);
    return m;
}

ModelPtr modulated(int steps = 16) {
    auto m = std::make_shared<ModelSpec>();
    m->innovations = modulated_mixture_family(m->covariance, 1.2, 0.3, 0.15, 1.0);
    m->steps = steps;
    return m;
}

ModelPtr gaussian_tanh() {
    auto m = std::make_shared<ModelSpec>();
    m->covariance = Coefficient::tanh_x(1.0, 0.2, 1.0);
    m->innovations = gaussian_family(m->covariance);
    return m;
}

// D^k_x of the N(x + shift, var) density at y, from GSL's probabilists' Hermite polynomials.
double gaussian_dx(int k, double x, double y, double shift, double var) {
    const double sd = std::sqrt(var);
    const double a = (y - x - shift) / sd;
    return gsl_sf_hermite_prob(k, a) / std::pow(sd, k) * std::exp(-0.5 * a * a) / (sd * std::sqrt(2.0 * std::numbers::pi));
}

double central_third(const std::function<double(double)>& f, double x, double e) {
    return (f(x + 2 * e) - 2 * f(x + e) + 2 * f(x - e) - f(x - 2 * e)) / (2 * e * e * e);
}

// x ↦ ∂³_z p̃(u, w, z, v) as a left factor.
class ThirdDerivativeLeft final : public SpaceTimeKernel {
  public:
    explicit ThirdDerivativeLeft(KernelPtr p) : p_(std::move(p)) {}
    double eval(double s, double t, double x, double y) const override { return p_->deriv(3, s, t, x, y); }
    const ModelSpec* model() const override { return p_->model(); }

  private:
    KernelPtr p_;
};

}  // namespace

TEST_CASE("classical Edgeworth terms") {
    const ModelPtr g = gaussian_flat();
    CHECK(pi_tilde_1(*g, 0.0, 1.0, 0.0, 0.4) == 0.0);
    CHECK(pi_tilde_2(*g, 0.0, 1.0, 0.0, 0.4) == 0.0);

    const ModelPtr e = exponential_flat();
    CHECK(std::abs(pi_tilde_1(*e, 0.0, 1.0, 0.3, 0.3)) < 1e-15);

    // χ₃ = 2, σ ≡ 1: π̃₁ = (2/6)·D³p̃ at y − x = 1, against a finite-difference third derivative.
    auto ptilde = [&](double x) { return frozen_density(*e, 0.0, 1.0, x, 1.0); };
    const double fd = central_third(ptilde, 0.0, 1e-3);
    CHECK(pi_tilde_1(*e, 0.0, 1.0, 0.0, 1.0) == doctest::Approx(2.0 / 6.0 * fd).epsilon(1e-5));

    // Order-6 term against GSL Hermite polynomials; time-dependent σ makes χ̄ a genuine average.
    const ModelPtr et = exponential_flat(0.4);
    const double s = 0.1, t = 0.9, x = -0.2, y = 0.5;
    const double var = 0.8 + 0.2 * (t * t - s * s);
    double c3 = 0.0, c4 = 0.0;
    for (int i = 0; i < 2000; ++i) {
        const double u = s + (t - s) * (i + 0.5) / 2000;
        const double sg = 1.0 + 0.4 * u;
        c3 += 2.0 * std::pow(sg, 1.5) / 2000;
        c4 += 6.0 * sg * sg / 2000;
    }
    const double e6 = (t - s) * c4 / 24 * gaussian_dx(4, x, y, 0.0, var) +
                      0.5 * (t - s) * (t - s) * (c3 / 6) * (c3 / 6) * gaussian_dx(6, x, y, 0.0, var);
    CHECK(pi_tilde_2(*et, s, t, x, y) == doctest::Approx(e6).epsilon(1e-6));
    CHECK_THROWS_AS(pi_tilde_1(*e, 1.0, 1.0, 0.0, 0.0), DomainError);
}

TEST_CASE("correction operators F1 and F2") {
    const ModelPtr g = gaussian_tanh();
    CHECK(apply_F1(g, frozen_density_kernel(g))->identically_zero());
    CHECK(apply_F2(g, frozen_density_kernel(g))->identically_zero());

    const ModelPtr e = exponential_flat();
    CHECK(std::abs(apply_F1(e, frozen_density_kernel(e))->eval(0.0, 1.0, 0.2, 0.2)) < 1e-15);

    const ModelPtr m = modulated();
    const KernelPtr p = frozen_density_kernel(m);
    const double s = 0.2, t = 0.8, x = 0.3, y = -0.1;
    auto px = [&](double z) { return frozen_density(*m, s, t, z, y); };
    const double d3 = central_third(px, x, 2e-3);
    const double d4 = (px(x + 2e-2) - 4 * px(x + 1e-2) + 6 * px(x) - 4 * px(x - 1e-2) + px(x - 2e-2)) / 1e-8;
    CHECK(apply_F1(m, p)->eval(s, t, x, y) == doctest::Approx(m->innovations.cumulant(3, s, x) / 6 * d3).epsilon(1e-4));
    CHECK(apply_F2(m, p)->eval(s, t, x, y) == doctest::Approx(m->innovations.cumulant(4, s, x) / 24 * d4).epsilon(1e-3));
    CHECK(apply_F2(m, p, F2Point::printed)->eval(s, t, x, y) ==
          doctest::Approx(m->innovations.cumulant(4, s, y) / 24 * d4).epsilon(1e-3));
    // Right sections carry the same values as pointwise evaluation.
    const SectionPtr sec = apply_F1(m, p)->right_section(s, t, y);
    CHECK(sec->value(x) == doctest::Approx(apply_F1(m, p)->eval(s, t, x, y)).epsilon(1e-13));

    CHECK_THROWS_AS(apply_F1(m, std::make_shared<ThirdDerivativeLeft>(p)), CapabilityError);
}

TEST_CASE("cumulant change of basis") {
    const ModelPtr m = modulated();
    const ModelPtr e = exponential_flat(0.3);
    for (const ModelPtr& spec : {m, e}) {
        for (int order : {3, 4}) {
            for (double u : {-1.5, -0.4, 0.0, 0.7, 1.9}) {
                const CumulantBasisSides sides = cumulant_basis_sides(*spec, order, 0.4, 0.25, u);
                CHECK(std::abs(sides.lhs - sides.rhs) < 1e-8);
            }
        }
    }
    CHECK_THROWS_AS(cumulant_basis_sides(*m, 5, 0.0, 0.0, 0.0), UnsupportedOrderError);
}

TEST_CASE("split convolution agrees with the direct form on analytic factors") {
    const ModelPtr m = modulated();
    const KernelPtr p = frozen_density_kernel(m);
    const QuadratureSpec q;
    std::vector<double> split;
    const std::vector<double> xs{-0.5, 0.0, 0.6};
    for (const OperatorPtr& op : {f1_operator(m), f2_operator(m)}) {
        split_convolve_batch(*p, *op, *p, 0.0, 1.0, xs, 0.2, q, split);
        const KernelPtr right = apply_differential(op, m, p);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double direct = time_space_convolve_raw(*p, *right, 0.0, 1.0, xs[i], 0.2, q);
            CHECK(std::abs(split[i] - direct) < 1e-7);
        }
    }
}

TEST_CASE("expansion terms reduce to the classical ones for x-independent innovations") {
    for (double slope : {0.0, 0.3}) {
        const ModelPtr e = exponential_flat(slope);
        ExpansionEngine engine(e, QuadratureSpec{});
        const std::vector<double> xs{-0.5, 0.0, 0.5};
        for (double y : {-0.5, 0.0, 0.5}) {
            const auto terms = engine.evaluate(0.0, 1.0, xs, y);
            for (std::size_t i = 0; i < xs.size(); ++i) {
                CHECK(std::abs(terms[i].pi1 - pi_tilde_1(*e, 0.0, 1.0, xs[i], y)) < 1e-5);
                CHECK(std::abs(terms[i].pi2 - pi_tilde_2(*e, 0.0, 1.0, xs[i], y)) < 1e-5);
                CHECK(terms[i].p_value == frozen_density(*e, 0.0, 1.0, xs[i], y));
            }
        }
    }
}

TEST_CASE("expansion terms for Gaussian innovations") {
    const ModelPtr flat = gaussian_flat();
    const ExpansionTerms z = ExpansionEngine(flat, QuadratureSpec{}).evaluate(0.0, 1.0, 0.1, 0.4);
    CHECK(z.pi1 == 0.0);
    CHECK(z.pi2 == 0.0);

    // Homogeneous, x-dependent σ: only the square-difference term survives.
    QuadratureSpec q;
    q.series_rmax = 2;
    const ModelPtr g = gaussian_tanh();
    ExpansionEngine engine(g, q);
    const ExpansionTerms t = engine.evaluate(0.0, 1.0, 0.0, 0.3);
    CHECK(t.pi1 == 0.0);
    CHECK(t.parts.f2 == 0.0);
    CHECK(t.parts.nested == 0.0);
    CHECK(std::abs(t.parts.time_diff) < 1e-10);
    CHECK(t.pi2 == doctest::Approx(0.5 * t.parts.square_diff).epsilon(1e-15));
    CHECK(std::abs(t.pi2) > 1e-3);
    // The printed form, with the operator on the tabulated right factor throughout.
    const auto b = engine.backward(0.0, 1.0, 0.3);
    const double direct =
        time_space_convolve_raw(*engine.forward(0.0, 1.0, 0.0), *operator_square_diff(g, b->density), 0.0, 1.0, 0.0, 0.3, q);
    CHECK(std::abs(0.5 * direct - t.pi2) < 1e-5);
}

TEST_CASE("nested term table against derivatives moved to the left factor") {
    const ModelPtr m = modulated();
    const QuadratureSpec q;
    ExpansionEngine engine(m, q);
    const double y = 0.5;
    const auto b = engine.backward(0.0, 1.0, y);
    REQUIRE(b->inner);
    const KernelPtr p = frozen_density_kernel(m);
    const ThirdDerivativeLeft d3(p);
    const KernelPtr f1p = apply_F1(m, p);
    for (double u : {0.0, 0.6, 0.9}) {
        for (double z : {-0.5, 0.5, 1.0}) {
            const double table = b->inner->deriv(3, u, 1.0, z, y);
            const double direct = time_space_convolve_raw(d3, *f1p, u, 1.0, z, y, q);
            CHECK(std::abs(table - direct) < 1e-3 * std::max(1.0, std::abs(direct)));
            CHECK(b->inner->eval(u, 1.0, z, y) == doctest::Approx(time_space_convolve_raw(*p, *f1p, u, 1.0, z, y, q)).epsilon(1e-5));
        }
    }
}

TEST_CASE("expansion terms are stable under quadrature refinement") {
    const ModelPtr m = modulated();
    QuadratureSpec q;
    ExpansionEngine coarse(m, q);
    ExpansionEngine fine(m, q.refined());
    const std::vector<double> xs{-0.5, 0.5};
    const auto a = coarse.evaluate(0.0, 1.0, xs, 0.5);
    const auto b = fine.evaluate(0.0, 1.0, xs, 0.5);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        CHECK(std::abs(a[i].pi1 - b[i].pi1) < 10 * q.tol_quad);
        CHECK(std::abs(a[i].pi2 - b[i].pi2) < 10 * q.tol_quad);
    }
    q.refinement_check = true;
    ExpansionEngine checked(m, q);
    const ExpansionTerms c = checked.evaluate(0.0, 1.0, -0.5, 0.5);
    CHECK(c.pi1 == b[0].pi1);
}

TEST_CASE("expansion terms bookkeeping") {
    const ModelPtr m = modulated(32);
    ExpansionEngine parallel(m, QuadratureSpec{}, {F2Point::integration, Execution::parallel});
    ExpansionEngine serial(m, QuadratureSpec{}, {F2Point::integration, Execution::serial});
    const std::vector<double> xs{-0.5, 0.0};
    const auto a = parallel.evaluate(0.0, 1.0, xs, 0.3);
    const auto b = serial.evaluate(0.0, 1.0, xs, 0.3);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        CHECK(std::memcmp(&a[i].pi2, &b[i].pi2, sizeof(double)) == 0);
        CHECK(std::memcmp(&a[i].pi1, &b[i].pi1, sizeof(double)) == 0);
        const double h = m->h();
        const double corrected = a[i].p_value + std::sqrt(h) * a[i].pi1 + h * a[i].pi2;
        CHECK(std::memcmp(&corrected, &a[i].corrected, sizeof(double)) == 0);
        CHECK(a[i].provenance.find("series_rmax") != std::string::npos);
    }
    const ExpansionTerms re = a[0].with_step(0.5);
    CHECK(re.corrected == a[0].p_value + std::sqrt(0.5) * a[0].pi1 + 0.5 * a[0].pi2);

    // Both F₂ readings coincide for x-independent cumulants.
    const ModelPtr e = exponential_flat(0.3);
    const double p1 = pi_2(e, 0.0, 1.0, 0.2, -0.1, QuadratureSpec{}, {F2Point::integration, Execution::parallel});
    const double p2 = pi_2(e, 0.0, 1.0, 0.2, -0.1, QuadratureSpec{}, {F2Point::printed, Execution::parallel});
    CHECK(std::abs(p1 - p2) < 1e-12);
    CHECK_THROWS_AS(parallel.evaluate(0.0, 1.5, 0.0, 0.0), DomainError);
}

TEST_CASE("expansion error") {
    const ModelPtr flat = gaussian_flat();
    const ExpansionError err = expansion_error(flat, standard_probes(), QuadratureSpec{});
    REQUIRE(err.points.size() == 9);
    CHECK(err.weighted_corrected < 1e-5);
    CHECK(err.weighted_raw < 1e-5);
    for (const auto& p : err.points) CHECK(p.weight >= 1.0);

    // The two-term expansion improves on p for a skewed, state-dependent family.
    ExpansionEngine engine(modulated(), QuadratureSpec{});
    const ExpansionError e16 = expansion_error(engine, 16, {{-0.5, 0.5}, {0.0, 0.7}});
    CHECK(e16.weighted_first_order < e16.weighted_raw);
    CHECK(e16.weighted_corrected < e16.weighted_first_order);
}
