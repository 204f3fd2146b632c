#include "edgechain/kernels/operators.hpp"

#include "edgechain/errors.hpp"
#include "edgechain/kernels/frozen_gaussian.hpp"

#include <cmath>
#include <numbers>

namespace edgechain {

namespace {

double binomial(int n, int k) {
    double b = 1.0;
    for (int j = 0; j < k; ++j) b = b * (n - j) / (j + 1);
    return b;
}

bool uses_terminal(OperatorKind k) { return k == OperatorKind::L_tilde || k == OperatorKind::L_tilde_prime; }
bool uses_time_derivative(OperatorKind k) { return k == OperatorKind::L_prime || k == OperatorKind::L_tilde_prime; }

// j-th x-derivative of the operator's second- and first-order coefficients at (s, x).
struct OperatorCoefficients {
    const ModelSpec* spec;
    OperatorKind kind;
    double sigma(int j, double s, double x) const {
        if (uses_time_derivative(kind)) return j == 0 ? spec->covariance.dt(s, x) : 0.0;
        return spec->covariance.dx(j, s, x);
    }
    double drift(int j, double s, double x) const {
        if (uses_time_derivative(kind)) return j == 0 ? spec->drift.dt(s, x) : 0.0;
        return spec->drift.dx(j, s, x);
    }
    bool vanishes() const {
        if (uses_time_derivative(kind)) return spec->covariance.slope_t == 0.0 && spec->drift.slope_t == 0.0;
        return false;
    }
};

class OperatorRightSection final : public Section {
  public:
    OperatorRightSection(OperatorCoefficients c, SectionPtr inner, double u, double y)
        : c_(c), inner_(std::move(inner)), u_(u), y_(y) {
        if (uses_terminal(c_.kind)) {
            sy_ = c_.sigma(0, u, y);
            my_ = c_.drift(0, u, y);
        }
    }
    double value(double z) const override { return deriv(0, z); }
    double deriv(int k, double z) const override {
        if (uses_terminal(c_.kind)) return 0.5 * sy_ * inner_->deriv(k + 2, z) + my_ * inner_->deriv(k + 1, z);
        double acc = 0.0;
        for (int j = 0; j <= k; ++j) {
            const double b = binomial(k, j);
            acc += b * (0.5 * c_.sigma(j, u_, z) * inner_->deriv(k - j + 2, z) + c_.drift(j, u_, z) * inner_->deriv(k - j + 1, z));
        }
        return acc;
    }

  private:
    OperatorCoefficients c_;
    SectionPtr inner_;
    double u_, y_;
    double sy_ = 0.0, my_ = 0.0;
};

class OperatorKernel final : public SpaceTimeKernel {
  public:
    OperatorKernel(OperatorKind kind, ModelPtr spec, KernelPtr f) : spec_(std::move(spec)), f_(std::move(f)), c_{spec_.get(), kind} {
        if (f_->max_deriv_order() < 2) throw CapabilityError("operator needs a kernel with derivatives to order 2");
    }
    double eval(double s, double t, double x, double y) const override { return deriv(0, s, t, x, y); }
    double deriv(int k, double s, double t, double x, double y) const override {
        if (k > max_deriv_order()) throw CapabilityError("operator kernel derivative order not available");
        if (zero()) return 0.0;
        if (uses_terminal(c_.kind)) {
            return 0.5 * c_.sigma(0, s, y) * f_->deriv(k + 2, s, t, x, y) + c_.drift(0, s, y) * f_->deriv(k + 1, s, t, x, y);
        }
        double acc = 0.0;
        for (int j = 0; j <= k; ++j) {
            acc += binomial(k, j) * (0.5 * c_.sigma(j, s, x) * f_->deriv(k - j + 2, s, t, x, y) +
                                     c_.drift(j, s, x) * f_->deriv(k - j + 1, s, t, x, y));
        }
        return acc;
    }
    int max_deriv_order() const override { return std::min(4, f_->max_deriv_order() - 2); }
    SectionPtr right_section(double u, double t, double y) const override {
        return std::make_unique<OperatorRightSection>(c_, f_->right_section(u, t, y), u, y);
    }
    Localization localization() const override { return f_->localization(); }
    bool identically_zero() const override { return zero(); }

    const ModelSpec* model() const override { return spec_.get(); }

  private:
    bool zero() const { return c_.vanishes() || f_->identically_zero(); }
    ModelPtr spec_;
    KernelPtr f_;
    OperatorCoefficients c_;
};

// (L*² − L²) coefficient functions A f′ + B f″ + C f‴ (the result is −(A f′ + B f″ + C f‴)).
struct SquareDiffCoefficients {
    double a, b, c;
    static SquareDiffCoefficients at(const ModelSpec& spec, double s, double x) {
        const double sg = spec.covariance.dx(0, s, x), sg1 = spec.covariance.dx(1, s, x), sg2 = spec.covariance.dx(2, s, x);
        const double m = spec.drift.dx(0, s, x), m1 = spec.drift.dx(1, s, x), m2 = spec.drift.dx(2, s, x);
        return {0.5 * sg * m2 + m * m1, 0.25 * sg * sg2 + sg * m1 + 0.5 * m * sg1, 0.5 * sg * sg1};
    }
};

class SquareDiffRightSection final : public Section {
  public:
    SquareDiffRightSection(const ModelSpec* spec, SectionPtr inner, double u) : spec_(spec), inner_(std::move(inner)), u_(u) {}
    double value(double z) const override {
        const auto c = SquareDiffCoefficients::at(*spec_, u_, z);
        return -(c.a * inner_->deriv(1, z) + c.b * inner_->deriv(2, z) + c.c * inner_->deriv(3, z));
    }

  private:
    const ModelSpec* spec_;
    SectionPtr inner_;
    double u_;
};

class SquareDiffKernel final : public SpaceTimeKernel {
  public:
    SquareDiffKernel(ModelPtr spec, KernelPtr f) : spec_(std::move(spec)), f_(std::move(f)) {
        if (f_->max_deriv_order() < 4) throw CapabilityError("(L*^2 - L^2) needs a kernel with derivatives to order 4");
    }
    double eval(double s, double t, double x, double y) const override {
        if (identically_zero()) return 0.0;
        const auto c = SquareDiffCoefficients::at(*spec_, s, x);
        return -(c.a * f_->deriv(1, s, t, x, y) + c.b * f_->deriv(2, s, t, x, y) + c.c * f_->deriv(3, s, t, x, y));
    }
    SectionPtr right_section(double u, double t, double y) const override {
        return std::make_unique<SquareDiffRightSection>(spec_.get(), f_->right_section(u, t, y), u);
    }
    Localization localization() const override { return f_->localization(); }
    bool identically_zero() const override { return spec_->coefficients_state_independent() || f_->identically_zero(); }

    const ModelSpec* model() const override { return spec_.get(); }

  private:
    ModelPtr spec_;
    KernelPtr f_;
};

// Leibniz rule for D^k [Δσ(x)/2 · D²p̃ + Δm(x) · Dp̃] given p̃ derivatives pd[0..k+2].
double h_leibniz(const ModelSpec& spec, int k, double s, double x, double y, const double* pd) {
    double acc = 0.0;
    for (int j = 0; j <= k; ++j) {
        const double ds = j == 0 ? spec.covariance.value(s, x) - spec.covariance.value(s, y) : spec.covariance.dx(j, s, x);
        const double dm = j == 0 ? spec.drift.value(s, x) - spec.drift.value(s, y) : spec.drift.dx(j, s, x);
        acc += binomial(k, j) * (0.5 * ds * pd[k - j + 2] + dm * pd[k - j + 1]);
    }
    return acc;
}

class HRightSection final : public Section {
  public:
    HRightSection(const ModelSpec* spec, double u, double t, double y) : spec_(spec), u_(u), y_(y) {
        const FrozenCoefficients c = integrated_coeffs(*spec, u, t, y);
        target_ = y - c.mean_shift;
        inv_sd_ = 1.0 / std::sqrt(c.covariance);
        norm_ = inv_sd_ / std::sqrt(2.0 * std::numbers::pi);
    }
    double value(double z) const override { return deriv(0, z); }
    double deriv(int k, double z) const override {
        if (k < 0 || k > 4) throw UnsupportedOrderError("H derivative order must be in [0, 4]");
        const double a = (target_ - z) * inv_sd_;
        const double g = norm_ * std::exp(-0.5 * a * a);
        double pd[7];
        double h0 = 1.0, h1 = a, scale = 1.0;
        pd[0] = g;
        for (int n = 1; n <= k + 2; ++n) {
            scale *= inv_sd_;
            pd[n] = scale * h1 * g;
            const double h2 = a * h1 - n * h0;
            h0 = h1;
            h1 = h2;
        }
        return h_leibniz(*spec_, k, u_, z, y_, pd);
    }

  private:
    const ModelSpec* spec_;
    double u_, y_;
    double target_ = 0.0, inv_sd_ = 0.0, norm_ = 0.0;
};

class HLeftSection final : public Section {
  public:
    HLeftSection(const ModelSpec* spec, double s, double u, double x) : spec_(spec), s_(s), u_(u), x_(x) {}
    double value(double z) const override {
        const FrozenGaussian g = frozen_gaussian(*spec_, s_, u_, x_, z);
        double pd[3] = {g.density(z), g.dx(1, z), g.dx(2, z)};
        return h_leibniz(*spec_, 0, s_, x_, z, pd);
    }

  private:
    const ModelSpec* spec_;
    double s_, u_, x_;
};

class HKernel final : public SpaceTimeKernel {
  public:
    explicit HKernel(ModelPtr spec) : spec_(std::move(spec)) {
        if (spec_->dim != 1) throw CapabilityError("numeric kernels are implemented for d = 1");
    }
    double eval(double s, double t, double x, double y) const override { return deriv(0, s, t, x, y); }
    double deriv(int k, double s, double t, double x, double y) const override {
        if (k < 0 || k > 4) throw UnsupportedOrderError("H derivative order must be in [0, 4]");
        if (identically_zero()) return 0.0;
        const FrozenGaussian g = frozen_gaussian(*spec_, s, t, x, y);
        double pd[7];
        for (int n = 0; n <= k + 2; ++n) pd[n] = g.dx(n, y);
        return h_leibniz(*spec_, k, s, x, y, pd);
    }
    int max_deriv_order() const override { return 4; }
    SectionPtr right_section(double u, double t, double y) const override {
        return std::make_unique<HRightSection>(spec_.get(), u, t, y);
    }
    SectionPtr left_section(double s, double u, double x) const override {
        return std::make_unique<HLeftSection>(spec_.get(), s, u, x);
    }
    bool identically_zero() const override { return spec_->coefficients_state_independent(); }

    const ModelSpec* model() const override { return spec_.get(); }

  private:
    ModelPtr spec_;
};

}  // namespace

KernelPtr apply_operator(OperatorKind kind, ModelPtr spec, KernelPtr f) {
    if (spec->dim != 1) throw CapabilityError("operators are implemented for d = 1");
    return std::make_shared<OperatorKernel>(kind, std::move(spec), std::move(f));
}

KernelPtr operator_square_diff(ModelPtr spec, KernelPtr f) {
    if (spec->dim != 1) throw CapabilityError("operators are implemented for d = 1");
    return std::make_shared<SquareDiffKernel>(std::move(spec), std::move(f));
}

void square_diff_coefficients(const ModelSpec& spec, double s, double x, double c[4]) {
    const auto k = SquareDiffCoefficients::at(spec, s, x);
    c[0] = 0.0;
    c[1] = -k.a;
    c[2] = -k.b;
    c[3] = -k.c;
}

KernelPtr kernel_H(ModelPtr spec) { return std::make_shared<HKernel>(std::move(spec)); }

}  // namespace edgechain
