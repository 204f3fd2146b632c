#pragma once

#include "edgechain/kernels/space_time_kernel.hpp"
#include "edgechain/model/model_spec.hpp"
#include "edgechain/parametrix/quadrature.hpp"

#include <memory>
#include <vector>

namespace edgechain {

/// Where F₂ evaluates its cumulants.
enum class F2Point {
    /// χ₄ at the kernel's first-slot point, as in F₁ (default).
    integration,
    /// χ₄ at the terminal point y.
    printed,
};

/// Σ_{j <= order} c_j(u, z, y)·∂^j_z acting on the x slot of a right factor f(u, t, z, y).
class DifferentialOperator {
  public:
    virtual ~DifferentialOperator() = default;
    virtual int order() const = 0;
    /// c[0..order] at (u, z) for terminal point y.
    virtual void coefficients(double u, double z, double y, double* c) const = 0;
    virtual bool vanishes() const { return false; }
};

using OperatorPtr = std::shared_ptr<const DifferentialOperator>;

/// χ₃(u,z)/3!·∂³.
OperatorPtr f1_operator(ModelPtr spec);
/// χ₄(u,·)/4!·∂⁴ with the cumulant point chosen by `point`.
OperatorPtr f2_operator(ModelPtr spec, F2Point point = F2Point::integration);
/// L*² − L² in expanded third-order form.
OperatorPtr square_diff_operator(ModelPtr spec);
/// L′ − L̃′.
OperatorPtr time_diff_operator(ModelPtr spec);

/// op[f] as a kernel (right sections carry the operator pointwise).
KernelPtr apply_differential(OperatorPtr op, ModelPtr spec, KernelPtr f);

/// F₁[f](s,t,x,y) = χ₃(s,x)/3!·∂³_x f.
KernelPtr apply_F1(ModelPtr spec, KernelPtr f);
/// F₂[f](s,t,x,y) = χ₄(s,·)/4!·∂⁴_x f.
KernelPtr apply_F2(ModelPtr spec, KernelPtr f, F2Point point = F2Point::integration);

/// out[i] = (left ⊗ op[base])(s, t, xs[i], y).
///
/// On u < (s+t)/2 the operator acts on the right factor. On the second half it is moved onto the
/// left factor by parts, (−1)^j ∂^j_z[left·c_j], with the product fitted by a Chebyshev series on the
/// spatial window, so no derivative of a narrow right factor is integrated against a wide one.
void split_convolve_batch(const SpaceTimeKernel& left, const DifferentialOperator& op, const SpaceTimeKernel& base,
                          double s, double t, const std::vector<double>& xs, double y, const QuadratureSpec& q,
                          std::vector<double>& out);

}  // namespace edgechain
