#pragma once

#include "edgechain/model/coefficient.hpp"
#include "edgechain/model/innovation.hpp"
#include "edgechain/model/multi_index.hpp"

#include <memory>
#include <string>
#include <vector>

namespace edgechain {

/// Declared bounds σ_* <= σ(t, x) <= σ*.
struct Ellipticity {
    double lower = 0.5;
    double upper = 2.0;
};

/// Chain X_{k+1} = X_k + m(kh, X_k)·h + √h·ξ_{k+1} together with its limiting diffusion.
struct ModelSpec {
    int dim = 1;
    Coefficient drift = Coefficient::constant(0.0);
    Coefficient covariance = Coefficient::constant(1.0);
    InnovationFamily innovations = gaussian_family(Coefficient::constant(1.0));
    double horizon = 1.0;
    int steps = 16;
    Ellipticity ellipticity{};

    double h() const { return horizon / steps; }
    /// S' of the innovation envelope.
    int envelope_order() const { return innovations.envelope_order; }
    /// S = (S' + 2)·d + 4.
    int envelope_exponent() const { return (envelope_order() + 2) * dim + 4; }

    /// Drift and covariance both independent of x.
    bool coefficients_state_independent() const;
    /// Drift, covariance and innovation law all independent of t.
    bool time_homogeneous() const;
    /// Structural sanity checks (ranges, dimension); throws DomainError.
    void check() const;
    /// Copy with a different step count.
    ModelSpec with_steps(int n) const;
};

using ModelPtr = std::shared_ptr<const ModelSpec>;

/// Frozen mean shift m(s,t,y) = ∫ m(u,y) du and covariance σ(s,t,y) = ∫ σ(u,y) du.
struct FrozenCoefficients {
    double mean_shift = 0.0;
    double covariance = 0.0;
};

FrozenCoefficients integrated_coeffs(const ModelSpec& spec, double s, double t, double y);

/// χ̄_ν(s,t,y) = (t−s)^{-1}∫ χ_ν(u,y) du by the fixed 16-point Gauss–Legendre rule.
double averaged_cumulant(const ModelSpec& spec, const MultiIndex& nu, double s, double t, double y);
double averaged_cumulant(const ModelSpec& spec, int order, double s, double t, double y);

/// ∫ z^k q(t,x,z) dz by mapped Gauss–Legendre quadrature split at the family's breakpoints.
double innovation_moment(const InnovationFamily& family, double t, double x, int k, double scale = 1.0);

/// Spot-check points for validate_assumptions.
struct ProbePlan {
    std::vector<double> times;
    std::vector<double> states;
    /// Default plan: 5 times across [0, T], 9 states across [-2, 2].
    static ProbePlan standard(const ModelSpec& spec);
};

struct ValidationEntry {
    std::string name;
    /// "pass", "fail" or "assumed".
    std::string status;
    double worst = 0.0;
    std::string note;
};

struct ValidationReport {
    std::vector<ValidationEntry> entries;
    bool all_passed() const;
};

ValidationReport validate_assumptions(const ModelSpec& spec, const ProbePlan& probes, double tol = 1e-6);

}  // namespace edgechain
