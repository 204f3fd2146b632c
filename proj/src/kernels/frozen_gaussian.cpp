#include "edgechain/kernels/frozen_gaussian.hpp"

#include "edgechain/errors.hpp"

#include <cmath>
#include <numbers>

namespace edgechain {

double hermite_he(int k, double a) {
    if (k < 0 || k > 12) throw UnsupportedOrderError("Hermite order must be in [0, 12]");
    double h0 = 1.0, h1 = a;
    if (k == 0) return h0;
    for (int n = 1; n < k; ++n) {
        const double h2 = a * h1 - n * h0;
        h0 = h1;
        h1 = h2;
    }
    return h1;
}

FrozenGaussian::FrozenGaussian(double shift, double cov) : shift_(shift), cov_(cov) {
    if (!std::isfinite(cov) || !std::isfinite(shift)) throw ModelEvaluationError("non-finite frozen Gaussian parameters");
    if (!(cov > 0.0)) throw ConditioningError("frozen covariance is not positive definite");
    inv_ = 1.0 / cov;
    logdet_ = std::log(cov);
    inv_sd_ = std::sqrt(inv_);
    norm_ = inv_sd_ / std::sqrt(2.0 * std::numbers::pi);
}

double FrozenGaussian::density(double y) const {
    const double a = (y - shift_) * inv_sd_;
    return norm_ * std::exp(-0.5 * a * a);
}

double FrozenGaussian::dx(int k, double y) const {
    if (k < 0 || k > 6) throw UnsupportedOrderError("frozen density derivative order must be in [0, 6]");
    const double a = (y - shift_) * inv_sd_;
    return std::pow(inv_sd_, k) * hermite_he(k, a) * norm_ * std::exp(-0.5 * a * a);
}

FrozenGaussian frozen_gaussian(const ModelSpec& spec, double s, double t, double x, double y) {
    const FrozenCoefficients c = integrated_coeffs(spec, s, t, y);
    return FrozenGaussian(x + c.mean_shift, c.covariance);
}

double frozen_density(const ModelSpec& spec, double s, double t, double x, double y) {
    return frozen_gaussian(spec, s, t, x, y).density(y);
}

double frozen_density_deriv(const ModelSpec& spec, int k, double s, double t, double x, double y) {
    if (spec.dim != 1) throw CapabilityError("frozen density derivatives are implemented for d = 1");
    return frozen_gaussian(spec, s, t, x, y).dx(k, y);
}

double frozen_density_deriv(const ModelSpec& spec, const MultiIndex& nu, double s, double t, double x, double y) {
    if (nu.dim() != spec.dim) throw DomainError("multi-index dimension does not match the model");
    return frozen_density_deriv(spec, nu.order(), s, t, x, y);
}

namespace {

// z ↦ p̃(u,t,z,y): parameters frozen at y are shared by the whole section.
class FrozenRightSection final : public Section {
  public:
    FrozenRightSection(const ModelSpec& spec, double u, double t, double y) {
        const FrozenCoefficients c = integrated_coeffs(spec, u, t, y);
        const FrozenGaussian g(c.mean_shift, c.covariance);
        target_ = y - c.mean_shift;
        inv_sd_ = std::sqrt(g.inverse());
        norm_ = inv_sd_ / std::sqrt(2.0 * std::numbers::pi);
    }
    double value(double z) const override {
        const double a = (target_ - z) * inv_sd_;
        return norm_ * std::exp(-0.5 * a * a);
    }
    double deriv(int k, double z) const override {
        if (k < 0 || k > 6) throw UnsupportedOrderError("frozen density derivative order must be in [0, 6]");
        const double a = (target_ - z) * inv_sd_;
        return std::pow(inv_sd_, k) * hermite_he(k, a) * norm_ * std::exp(-0.5 * a * a);
    }

  private:
    double target_ = 0.0, inv_sd_ = 0.0, norm_ = 0.0;
};

class FrozenLeftSection final : public Section {
  public:
    FrozenLeftSection(ModelPtr spec, double s, double u, double x) : spec_(std::move(spec)), s_(s), u_(u), x_(x) {}
    double value(double z) const override { return frozen_density(*spec_, s_, u_, x_, z); }

  private:
    ModelPtr spec_;
    double s_, u_, x_;
};

class FrozenDensityKernel final : public SpaceTimeKernel {
  public:
    explicit FrozenDensityKernel(ModelPtr spec) : spec_(std::move(spec)) {
        if (spec_->dim != 1) throw CapabilityError("numeric kernels are implemented for d = 1");
    }
    double eval(double s, double t, double x, double y) const override { return frozen_density(*spec_, s, t, x, y); }
    double deriv(int k, double s, double t, double x, double y) const override {
        return frozen_density_deriv(*spec_, k, s, t, x, y);
    }
    int max_deriv_order() const override { return 6; }
    SectionPtr right_section(double u, double t, double y) const override {
        return std::make_unique<FrozenRightSection>(*spec_, u, t, y);
    }
    SectionPtr left_section(double s, double u, double x) const override {
        return std::make_unique<FrozenLeftSection>(spec_, s, u, x);
    }
    bool dirac_at_zero_elapsed() const override { return true; }

    const ModelSpec* model() const override { return spec_.get(); }

  private:
    ModelPtr spec_;
};

}  // namespace

KernelPtr frozen_density_kernel(ModelPtr spec) { return std::make_shared<FrozenDensityKernel>(std::move(spec)); }

}  // namespace edgechain
