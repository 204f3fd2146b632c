#pragma once

#include "edgechain/model/model_spec.hpp"

namespace edgechain {

/// π̃₁ = (t − s)·χ̄₃(s,t,y)/3!·D³p̃(s,t,x,y).
double pi_tilde_1(const ModelSpec& spec, double s, double t, double x, double y);

/// π̃₂ = (t − s)·χ̄₄/4!·D⁴p̃ + ½(t − s)²·(χ̄₃/3!)²·D⁶p̃.
double pi_tilde_2(const ModelSpec& spec, double s, double t, double x, double y);

/// Both sides of the cumulant change-of-basis identity in d = 1 with A = σ(t,x)^{-1/2}:
///   lhs = χ_order(AX)/order!·D^order φ(z) at z = A·u,
///   rhs = χ_order(X)/order!·D_u^order [φ(A·u)],
/// where X ~ q(t, x, ·). The lhs cumulant comes from numerically integrated moments of AX;
/// the rhs uses the family's cumulant and the chain rule.
struct CumulantBasisSides {
    double lhs = 0.0;
    double rhs = 0.0;
};
CumulantBasisSides cumulant_basis_sides(const ModelSpec& spec, int order, double t, double x, double u);

}  // namespace edgechain
