#pragma once

#include "edgechain/kernels/space_time_kernel.hpp"
#include "edgechain/model/chain.hpp"
#include "edgechain/model/model_spec.hpp"
#include "edgechain/parallel.hpp"
#include "edgechain/parametrix/quadrature.hpp"
#include "edgechain/parametrix/series.hpp"

#include <vector>

namespace edgechain {

/// p̃_h(jh, kh, x, y): density at y of x + Σ_i m(ih, y)h + √h·Σ_i ξ_i with every ξ_i ~ q(ih, y, ·).
/// One step is closed form. Longer chains use Fourier inversion of the characteristic-function
/// product when the family has one, and repeated grid convolution otherwise.
double frozen_chain_density(const ModelSpec& spec, int j, int k, double x, double y, const QuadratureSpec& q);

/// Fourier route. Raises CapabilityError without char_fn and ResolutionError when the frequency grid
/// cannot resolve the law or the reconstruction carries negative mass above tol_quad.
double frozen_chain_density_fourier(const ModelSpec& spec, int j, int k, double x, double y,
                                    const QuadratureSpec& q);

/// Grid route: step densities sampled on a uniform grid, convolved k − j − 1 times, last step exact.
double frozen_chain_density_grid(const ModelSpec& spec, int j, int k, double x, double y, const QuadratureSpec& q);

/// p̃_h as a kernel on grid times (s = jh, t = kh).
KernelPtr frozen_chain_kernel(ModelPtr spec, const QuadratureSpec& q);

/// H_h(jh, kh, x, y) = h⁻¹[∫ p_h(jh,(j+1)h,x,z) λ(z) dz − ∫ p̃_h^y(jh,(j+1)h,x,z) λ(z) dz],
/// λ(z) = p̃_h((j+1)h, kh, z, y), on grid times only.
KernelPtr kernel_H_h(ModelPtr spec, const QuadratureSpec& q);

/// Chain density by the discrete parametrix series p_h = Σ_r p̃_h ⊗_h H_h^(r) (Dirac convention at i = j).
///
/// All orders up to k − j are formed on the chain grid; the frozen-chain factors are the grid
/// recursions of the frozen one-step densities, so the full sum reproduces the grid
/// Chapman–Kolmogorov recursion exactly. r_used = min(series_rmax, k − j) when series_tail_tol = 0;
/// otherwise the first r whose dropped terms sum below the tolerance. tail_bound is the exact size
/// Σ_{r > r_used} |terms[r]| of what was dropped, and `terms` lists every order.
SeriesResult parametrix_p_h(const ModelPtr& spec, int j, int k, double x, double y, const QuadratureSpec& q,
                            Execution exec = Execution::parallel);

/// Pairs (xs[i], ys[i]) on a shared grid; the grid defaults to make_chain_axis over all points.
std::vector<SeriesResult> parametrix_p_h_batch(const ModelPtr& spec, int j, int k, const std::vector<double>& xs,
                                               const std::vector<double>& ys, const QuadratureSpec& q,
                                               Execution exec = Execution::parallel);
std::vector<SeriesResult> parametrix_p_h_batch(const ModelPtr& spec, int j, int k, const std::vector<double>& xs,
                                               const std::vector<double>& ys, const ChainAxis& axis,
                                               const QuadratureSpec& q, Execution exec = Execution::parallel);

/// Chain grid used by parametrix_p_h for the given points.
ChainAxis chain_axis_for(const ModelSpec& spec, const std::vector<double>& points, const QuadratureSpec& q);

}  // namespace edgechain
