#pragma once

#include "edgechain/kernels/space_time_kernel.hpp"
#include "edgechain/model/model_spec.hpp"
#include "edgechain/parallel.hpp"
#include "edgechain/parametrix/field.hpp"
#include "edgechain/parametrix/quadrature.hpp"

#include <vector>

namespace edgechain {

/// Truncated series value with its per-order contributions.
struct SeriesResult {
    double value = 0.0;
    std::vector<double> terms;
    /// Envelope bound on the dropped orders r > r_used.
    double tail_bound = 0.0;
    int r_used = 0;
};

/// Constants of |p̃⊗H^(r)(s,t,x,y)| <= C1^{r+1}·ρ^r / Γ(1 + r/2) · φ_{C,ρ}(y − x), ρ = √(t − s).
struct EnvelopeFit {
    double c = 1.0;
    double c1 = 0.0;
    double rho = 0.0;

    /// Envelope of order r at displacement y − x.
    double bound(int r, double displacement) const;
    /// Σ_{m > r} bound(m, displacement).
    double tail(int r, double displacement) const;
};

/// Fits (C, C1) from p̃ and p̃⊗H scanned over x at fixed (s, t, y).
EnvelopeFit fit_envelope(const ModelPtr& spec, double s, double t, double y, const QuadratureSpec& q);

/// Iterated kernels Φ_1 = H, Φ_r = H ⊗ Φ_{r−1}, tabulated as right factors anchored at (t, y) over [s0, t).
struct BackwardChain {
    double s0 = 0.0, t = 0.0, y = 0.0;
    /// phi[r − 1] = Φ_r; phi[0] is H itself.
    std::vector<KernelPtr> phi;
};

BackwardChain build_backward_chain(const ModelPtr& spec, double s0, double t, double y, int rmax,
                                   const QuadratureSpec& q, Execution exec = Execution::parallel);

/// Forward terms F_1 = p̃ ⊗ H, F_r = F_{r−1} ⊗ H, tabulated as left factors anchored at (s, x) over (s, t1].
struct ForwardChain {
    double s = 0.0, t1 = 0.0, x = 0.0;
    /// terms[r − 1] = F_r.
    std::vector<KernelPtr> terms;
};

ForwardChain build_forward_chain(const ModelPtr& spec, double s, double t1, double x, int rmax,
                                 const QuadratureSpec& q, Execution exec = Execution::parallel);

/// Table geometry for a kernel anchored at (time, point) whose time extent is `extent`.
FieldGeometry field_geometry(const ModelSpec& spec, FieldAnchor anchor, double time, double point, double extent,
                             double alpha, const QuadratureSpec& q);

/// Backward density table P(u, t, z, y) = p̃ + p̃ ⊗ (Φ_1 + … + Φ_R) for u in [s0, t).
FieldPtr backward_density_table(const ModelPtr& spec, const BackwardChain& chain, const QuadratureSpec& q,
                                Execution exec = Execution::parallel);

/// Forward density kernel P(s, u, x, z) = p̃ + F_1 + … + F_R as a left factor.
KernelPtr forward_density_kernel(const ModelPtr& spec, const ForwardChain& chain);

/// Transition density of the diffusion by the parametrix series p = Σ_r p̃ ⊗ H^(r).
///
/// r_used is the first order whose envelope falls below q.series_tail_tol, capped at q.series_rmax;
/// with series_tail_tol = 0 all orders up to series_rmax are summed. If the cap is reached with the
/// envelope still above a positive tolerance, TruncationError carries the tail bound.
/// When H vanishes identically the series is p̃ with r_used = 0 and a zero tail.
SeriesResult parametrix_p(const ModelPtr& spec, double s, double t, double x, double y, const QuadratureSpec& q,
                          Execution exec = Execution::parallel);

/// parametrix_p at several starts sharing one terminal point (the iterated kernels are built once).
std::vector<SeriesResult> parametrix_p_batch(const ModelPtr& spec, double s, double t, const std::vector<double>& xs,
                                             double y, const QuadratureSpec& q, Execution exec = Execution::parallel);

}  // namespace edgechain
