#pragma once

#include "edgechain/kernels/space_time_kernel.hpp"
#include "edgechain/parallel.hpp"
#include "edgechain/parametrix/quadrature.hpp"

#include <vector>

namespace edgechain {

/// (f ⊗ g)(s,t,x,y) = ∫_s^t du ∫ f(s,u,x,z) g(u,t,z,y) dz.
/// With q.refinement_check the value is recomputed at q.refined(); a disagreement above
/// 10·tol_quad (relative to max(1, |value|)) raises AccuracyError. The refined value is returned.
double time_space_convolve(const KernelPtr& f, const KernelPtr& g, double s, double t, double x, double y,
                           const QuadratureSpec& q);

/// Same integral without the refinement check.
double time_space_convolve_raw(const SpaceTimeKernel& f, const SpaceTimeKernel& g, double s, double t, double x,
                               double y, const QuadratureSpec& q);

/// out[i] = (f ⊗ g)(s,t,xs[i],y); right sections of g are shared across the batch.
void convolve_batch_left_points(const SpaceTimeKernel& f, const SpaceTimeKernel& g, double s, double t,
                                const std::vector<double>& xs, double y, const QuadratureSpec& q,
                                std::vector<double>& out);

/// out[i] = (f ⊗ g)(s,t,x,ys[i]); left sections of f are shared across the batch.
void convolve_batch_right_points(const SpaceTimeKernel& f, const SpaceTimeKernel& g, double s, double t, double x,
                                 const std::vector<double>& ys, const QuadratureSpec& q, std::vector<double>& out);

/// Treatment of the i = j term of a discrete convolution.
enum class DiscreteBoundary {
    /// The left factor at zero elapsed time acts as δ, contributing h·g(jh,kh,x,y).
    dirac,
    /// The i = j term is dropped.
    omit,
};

/// (f ⊗_h g)(jh,kh,x,y) = Σ_{i=j}^{k−1} h ∫ f(jh,ih,x,z) g(ih,kh,z,y) dz.
/// Requires j < k; the i = j term follows the boundary convention.
double discrete_convolve(const KernelPtr& f, const KernelPtr& g, int j, int k, double x, double y, double h,
                         const QuadratureSpec& q, DiscreteBoundary boundary = DiscreteBoundary::dirac);

}  // namespace edgechain
