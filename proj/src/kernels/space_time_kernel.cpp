#include "edgechain/kernels/space_time_kernel.hpp"

#include "edgechain/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace edgechain {

double Section::deriv(int k, double z) const {
    if (k == 0) return value(z);
    throw CapabilityError("section does not provide derivatives");
}

void Section::values(const double* z, double* out, int n) const {
    for (int i = 0; i < n; ++i) out[i] = value(z[i]);
}

double SpaceTimeKernel::deriv(int k, double s, double t, double x, double y) const {
    if (k == 0) return eval(s, t, x, y);
    if (k < 0 || k > max_deriv_order()) throw CapabilityError("kernel derivative order not available");
    return finite_difference(k, s, t, x, y);
}

double SpaceTimeKernel::deriv(const MultiIndex& nu, double s, double t, double x, double y) const {
    if (nu.dim() != 1) throw CapabilityError("kernel derivatives are implemented for d = 1");
    return deriv(nu.order(), s, t, x, y);
}

double SpaceTimeKernel::finite_difference(int k, double s, double t, double x, double y) const {
    const double rho = std::sqrt(t - s);
    const double e =
        k <= 2 ? rho * 1e-4 : rho * std::pow(std::numeric_limits<double>::epsilon(), 1.0 / (k + 2));
    // Central stencil: Σ_j (−1)^j C(k,j) f(x + (k/2 − j)e) / e^k.
    double acc = 0.0, binom = 1.0;
    for (int j = 0; j <= k; ++j) {
        acc += ((j % 2) ? -1.0 : 1.0) * binom * eval(s, t, x + (0.5 * k - j) * e, y);
        binom = binom * (k - j) / (j + 1);
    }
    return acc / std::pow(e, k);
}

namespace {

class RightWrap final : public Section {
  public:
    RightWrap(const SpaceTimeKernel* k, double u, double t, double y) : k_(k), u_(u), t_(t), y_(y) {}
    double value(double z) const override { return k_->eval(u_, t_, z, y_); }
    double deriv(int k, double z) const override { return k_->deriv(k, u_, t_, z, y_); }

  private:
    const SpaceTimeKernel* k_;
    double u_, t_, y_;
};

class LeftWrap final : public Section {
  public:
    LeftWrap(const SpaceTimeKernel* k, double s, double u, double x) : k_(k), s_(s), u_(u), x_(x) {}
    double value(double z) const override { return k_->eval(s_, u_, x_, z); }

  private:
    const SpaceTimeKernel* k_;
    double s_, u_, x_;
};

class ConstSection final : public Section {
  public:
    explicit ConstSection(double c) : c_(c) {}
    double value(double) const override { return c_; }
    double deriv(int k, double) const override { return k == 0 ? c_ : 0.0; }

  private:
    double c_;
};

class ConstantKernel final : public SpaceTimeKernel {
  public:
    explicit ConstantKernel(double c) : c_(c) {}
    double eval(double, double, double, double) const override { return c_; }
    double deriv(int k, double, double, double, double) const override { return k == 0 ? c_ : 0.0; }
    int max_deriv_order() const override { return 8; }
    SectionPtr right_section(double, double, double) const override { return std::make_unique<ConstSection>(c_); }
    SectionPtr left_section(double, double, double) const override { return std::make_unique<ConstSection>(c_); }
    Localization localization() const override { return Localization::global; }
    bool identically_zero() const override { return c_ == 0.0; }

  private:
    double c_;
};

class SumSection final : public Section {
  public:
    std::vector<std::pair<double, SectionPtr>> parts;
    double value(double z) const override {
        double acc = 0.0;
        for (const auto& [w, s] : parts) acc += w * s->value(z);
        return acc;
    }
    double deriv(int k, double z) const override {
        double acc = 0.0;
        for (const auto& [w, s] : parts) acc += w * s->deriv(k, z);
        return acc;
    }
};

class SumKernel final : public SpaceTimeKernel {
  public:
    explicit SumKernel(std::vector<std::pair<double, KernelPtr>> parts) : parts_(std::move(parts)) {
        if (parts_.empty()) throw DomainError("sum kernel needs at least one part");
    }
    double eval(double s, double t, double x, double y) const override {
        double acc = 0.0;
        for (const auto& [w, k] : parts_) acc += w * k->eval(s, t, x, y);
        return acc;
    }
    double deriv(int order, double s, double t, double x, double y) const override {
        double acc = 0.0;
        for (const auto& [w, k] : parts_) acc += w * k->deriv(order, s, t, x, y);
        return acc;
    }
    int max_deriv_order() const override {
        int m = 1 << 20;
        for (const auto& p : parts_) m = std::min(m, p.second->max_deriv_order());
        return m;
    }
    SectionPtr right_section(double u, double t, double y) const override {
        auto s = std::make_unique<SumSection>();
        for (const auto& [w, k] : parts_) s->parts.emplace_back(w, k->right_section(u, t, y));
        return s;
    }
    SectionPtr left_section(double s0, double u, double x) const override {
        auto s = std::make_unique<SumSection>();
        for (const auto& [w, k] : parts_) s->parts.emplace_back(w, k->left_section(s0, u, x));
        return s;
    }
    Localization localization() const override {
        for (const auto& p : parts_) {
            if (p.second->localization() == Localization::global) return Localization::global;
        }
        return Localization::gaussian;
    }
    bool dirac_at_zero_elapsed() const override {
        return std::any_of(parts_.begin(), parts_.end(), [](const auto& p) { return p.second->dirac_at_zero_elapsed(); });
    }
    bool identically_zero() const override {
        return std::all_of(parts_.begin(), parts_.end(),
                           [](const auto& p) { return p.first == 0.0 || p.second->identically_zero(); });
    }

    const ModelSpec* model() const override {
        for (const auto& p : parts_) {
            if (const ModelSpec* m = p.second->model()) return m;
        }
        return nullptr;
    }

  private:
    std::vector<std::pair<double, KernelPtr>> parts_;
};

}  // namespace

SectionPtr SpaceTimeKernel::right_section(double u, double t, double y) const {
    return std::make_unique<RightWrap>(this, u, t, y);
}

SectionPtr SpaceTimeKernel::left_section(double s, double u, double x) const {
    return std::make_unique<LeftWrap>(this, s, u, x);
}

KernelPtr constant_kernel(double c) { return std::make_shared<ConstantKernel>(c); }
KernelPtr zero_kernel() { return std::make_shared<ConstantKernel>(0.0); }
KernelPtr sum_kernel(std::vector<std::pair<double, KernelPtr>> parts) {
    return std::make_shared<SumKernel>(std::move(parts));
}

}  // namespace edgechain
