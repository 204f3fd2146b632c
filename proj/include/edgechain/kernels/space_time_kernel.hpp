#pragma once

#include "edgechain/model/multi_index.hpp"

#include <memory>
#include <vector>

namespace edgechain {

struct ModelSpec;

/// One-argument slice of a kernel at fixed times and a fixed anchor.
class Section {
  public:
    virtual ~Section() = default;
    virtual double value(double z) const = 0;
    /// k-th derivative in the free argument. Only right sections (free x slot) support k > 0.
    virtual double deriv(int k, double z) const;
    virtual void values(const double* z, double* out, int n) const;
};

using SectionPtr = std::unique_ptr<const Section>;

/// How a kernel's mass sits in the free spatial argument.
enum class Localization {
    /// Concentrated within a few √(σ*·elapsed) of the anchor (densities, H, tables).
    gaussian,
    /// No decay; only usable against a localized partner.
    global,
};

/// f(s, t, x, y) with access to ∂^k_x.
class SpaceTimeKernel {
  public:
    virtual ~SpaceTimeKernel() = default;

    virtual double eval(double s, double t, double x, double y) const = 0;
    /// ∂^k f / ∂x^k. The default is a central finite difference with step (t−s)^{1/2}·1e-4 for k <= 2
    /// and (t−s)^{1/2}·ε^{1/(k+2)} beyond, available up to max_deriv_order().
    virtual double deriv(int k, double s, double t, double x, double y) const;
    double deriv(const MultiIndex& nu, double s, double t, double x, double y) const;
    virtual int max_deriv_order() const { return 2; }

    /// z ↦ f(u, t, z, y), with derivatives in z.
    virtual SectionPtr right_section(double u, double t, double y) const;
    /// z ↦ f(s, u, x, z).
    virtual SectionPtr left_section(double s, double u, double x) const;

    virtual Localization localization() const { return Localization::gaussian; }
    /// True for transition densities: f(s, s, x, ·) = δ_x.
    virtual bool dirac_at_zero_elapsed() const { return false; }
    /// True when the kernel is known to vanish identically.
    virtual bool identically_zero() const { return false; }
    /// Model whose bounds and drift locate the kernel's mass; may be null.
    virtual const ModelSpec* model() const { return nullptr; }

  protected:
    double finite_difference(int k, double s, double t, double x, double y) const;
};

using KernelPtr = std::shared_ptr<const SpaceTimeKernel>;

/// f ≡ c.
KernelPtr constant_kernel(double c);
/// f ≡ 0.
KernelPtr zero_kernel();
/// Σ_i w_i f_i.
KernelPtr sum_kernel(std::vector<std::pair<double, KernelPtr>> parts);

}  // namespace edgechain
