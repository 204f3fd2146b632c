#pragma once

#include "edgechain/kernels/space_time_kernel.hpp"
#include "edgechain/model/model_spec.hpp"

namespace edgechain {

/// Probabilists' Hermite polynomial He_k(a), 0 <= k <= 12.
double hermite_he(int k, double a);

/// Gaussian N(shift, cov) in its argument, with cached inverse and log-determinant.
class FrozenGaussian {
  public:
    FrozenGaussian(double shift, double cov);

    double shift() const { return shift_; }
    double cov() const { return cov_; }
    double inverse() const { return inv_; }
    double logdet() const { return logdet_; }

    double density(double y) const;
    /// ∂^k/∂x^k of φ_cov(y − x − m) where shift = x + m; equals cov^{-k/2}·He_k(a)·φ with a = (y − shift)/√cov.
    double dx(int k, double y) const;

  private:
    double shift_, cov_, inv_, logdet_, inv_sd_, norm_;
};

/// Frozen parameters of p̃(s,t,x,·) evaluated at terminal y.
FrozenGaussian frozen_gaussian(const ModelSpec& spec, double s, double t, double x, double y);

/// p̃(s,t,x,y): Gaussian density at y with mean x + m(s,t,y), covariance σ(s,t,y).
double frozen_density(const ModelSpec& spec, double s, double t, double x, double y);
/// ∂^ν_x p̃(s,t,x,y), |ν| <= 6.
double frozen_density_deriv(const ModelSpec& spec, const MultiIndex& nu, double s, double t, double x, double y);
double frozen_density_deriv(const ModelSpec& spec, int k, double s, double t, double x, double y);

/// p̃ as a kernel with analytic derivatives to order 6.
KernelPtr frozen_density_kernel(ModelPtr spec);

}  // namespace edgechain
