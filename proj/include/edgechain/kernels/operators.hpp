#pragma once

#include "edgechain/kernels/space_time_kernel.hpp"
#include "edgechain/model/model_spec.hpp"

namespace edgechain {

/// Second-order operators acting on the x slot of a kernel f(s,t,x,y).
enum class OperatorKind {
    /// ½σ(s,x)∂² + m(s,x)∂
    L,
    /// ½σ(s,y)∂² + m(s,y)∂
    L_tilde,
    /// Coefficients frozen at the evaluation point; a single application equals L.
    L_star,
    /// ½∂_sσ(s,x)∂² + ∂_s m(s,x)∂
    L_prime,
    /// ½∂_sσ(s,y)∂² + ∂_s m(s,y)∂
    L_tilde_prime,
};

KernelPtr apply_operator(OperatorKind kind, ModelPtr spec, KernelPtr f);

/// (L*² − L²)f in expanded form:
///   −[(½σm″ + mm′)f′ + (¼σσ″ + σm′ + ½mσ′)f″ + ½σσ′f‴], coefficients at (s, x).
KernelPtr operator_square_diff(ModelPtr spec, KernelPtr f);

/// Coefficients of (L*² − L²) = c[1]·∂ + c[2]·∂² + c[3]·∂³ at (s, x).
void square_diff_coefficients(const ModelSpec& spec, double s, double x, double c[4]);

/// H(s,t,x,y) = ½(σ(s,x) − σ(s,y))∂²_x p̃ + (m(s,x) − m(s,y))∂_x p̃, analytic derivatives to order 4.
KernelPtr kernel_H(ModelPtr spec);

}  // namespace edgechain
