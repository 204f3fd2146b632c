#pragma once

#include "edgechain/edgeworth/corrections.hpp"
#include "edgechain/kernels/space_time_kernel.hpp"
#include "edgechain/model/model_spec.hpp"
#include "edgechain/parallel.hpp"
#include "edgechain/parametrix/field.hpp"
#include "edgechain/parametrix/quadrature.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

namespace edgechain {

/// The four pieces of π₂.
struct Pi2Parts {
    /// p ⊗ F₂[p].
    double f2 = 0.0;
    /// p ⊗ F₁[p ⊗ F₁[p]].
    double nested = 0.0;
    /// p ⊗ (L*² − L²)p, before the factor ½.
    double square_diff = 0.0;
    /// p ⊗ (L′ − L̃′)p, before the factor ½.
    double time_diff = 0.0;

    double total() const { return f2 + nested + 0.5 * square_diff - 0.5 * time_diff; }
};

struct ExpansionTerms {
    double p_value = 0.0;
    double pi1 = 0.0;
    double pi2 = 0.0;
    /// p_value + √h·pi1 + h·pi2, evaluated in that order.
    double corrected = 0.0;
    Pi2Parts parts{};
    std::string provenance;

    static ExpansionTerms assemble(double p_value, double pi1, const Pi2Parts& parts, double h, std::string provenance);
    /// Same pieces with `corrected` recomputed for step h.
    ExpansionTerms with_step(double h) const;
};

struct ExpansionOptions {
    F2Point f2_point = F2Point::integration;
    Execution exec = Execution::parallel;
};

/// Evaluates p, π₁ and π₂ with the density tables cached per terminal (s, t, y) and per start (s, t, x).
///
/// p is summed to q.series_rmax in every factor. The nested term goes through
/// Ψ = Σ_r H^(r) ⊗ F₁[p] and K = p̃ ⊗ Ψ, so each left factor is p̃, H or a forward table.
/// With q.refinement_check every value is recomputed at q.refined() and a disagreement above
/// 10·tol_quad raises AccuracyError naming the term.
class ExpansionEngine {
  public:
    ExpansionEngine(ModelPtr spec, QuadratureSpec q, ExpansionOptions options = {});

    /// Terms at t = kh with h = T / steps of the engine's model.
    std::vector<ExpansionTerms> evaluate(double s, double t, const std::vector<double>& xs, double y);
    ExpansionTerms evaluate(double s, double t, double x, double y);

    /// Right factors at the terminal (t, y) over starts in [s, t).
    struct Backward {
        /// p(u, t, z, y).
        KernelPtr density;
        /// K(u, t, z, y) = (p ⊗ F₁[p])(u, t, z, y); null when F₁ vanishes.
        KernelPtr inner;
        int tables = 0;
    };
    std::shared_ptr<const Backward> backward(double s, double t, double y);
    /// Left-factor density p(s, ·, x, ·) over (s, t].
    KernelPtr forward(double s, double t, double x);

    const ModelSpec& model() const { return *spec_; }
    const QuadratureSpec& quadrature() const { return q_; }
    const ExpansionOptions& options() const { return options_; }

  private:
    std::vector<ExpansionTerms> evaluate_once(double s, double t, const std::vector<double>& xs, double y);
    bool parametrix_trivial() const;
    /// out[i] = (p ⊗ op[base])(s, t, xs[i], y).
    std::vector<double> against(const DifferentialOperator& op, const KernelPtr& base, double s, double t,
                                const std::vector<double>& xs, double y);

    ModelPtr spec_;
    QuadratureSpec q_;
    ExpansionOptions options_;
    OperatorPtr f1_, f2_, square_diff_, time_diff_;
    std::unique_ptr<ExpansionEngine> fine_;
    std::mutex mutex_;
    std::map<std::tuple<double, double, double>, std::shared_ptr<const Backward>> backward_cache_;
    std::map<std::tuple<double, double, double>, KernelPtr> forward_cache_;
};

/// π₁(s, t, x, y) = p ⊗ F₁[p].
double pi_1(const ModelPtr& spec, double s, double t, double x, double y, const QuadratureSpec& q,
            const ExpansionOptions& options = {});
/// π₂(s, t, x, y) = p⊗F₂[p] + p⊗F₁[p⊗F₁[p]] + ½p⊗(L*²−L²)p − ½p⊗(L′−L̃′)p.
double pi_2(const ModelPtr& spec, double s, double t, double x, double y, const QuadratureSpec& q,
            const ExpansionOptions& options = {});

struct ProbePoint {
    double x = 0.0;
    double y = 0.0;
};

struct ExpansionErrorPoint {
    double x = 0.0, y = 0.0;
    double p_h = 0.0;
    ExpansionTerms terms{};
    /// T^{1/2}(1 + |(y − x)/√T|^{S′}).
    double weight = 1.0;
    /// |p_h − p|, |p_h − p − √h·π₁|, |p_h − corrected|.
    double raw = 0.0, first_order = 0.0, corrected = 0.0;
};

struct ExpansionError {
    std::vector<ExpansionErrorPoint> points;
    /// Maxima over the probes of weight·error.
    double weighted_raw = 0.0, weighted_first_order = 0.0, weighted_corrected = 0.0;
    std::string oracle;
};

/// Weighted error of the two-term expansion at t = T, with p_h from the Chapman–Kolmogorov oracle.
ExpansionError expansion_error(const ModelPtr& spec, const std::vector<ProbePoint>& probes, const QuadratureSpec& q,
                               const ExpansionOptions& options = {}, double tol_mass = 1e-8);
/// Same with an existing engine (p, π₁, π₂ do not depend on the step count) and the chain run for `steps` steps.
ExpansionError expansion_error(ExpansionEngine& engine, int steps, const std::vector<ProbePoint>& probes,
                               double tol_mass = 1e-8);

/// n-independent terms at (0, T) for each probe.
std::vector<ExpansionTerms> expansion_terms(ExpansionEngine& engine, const std::vector<ProbePoint>& probes);
/// Errors of precomputed terms against the oracle chain run for `steps` steps.
ExpansionError expansion_error(const ModelSpec& model, int steps, const std::vector<ProbePoint>& probes,
                               const std::vector<ExpansionTerms>& terms, const QuadratureSpec& q, double tol_mass = 1e-8,
                               Execution exec = Execution::parallel);

/// Nine probes: x ∈ {−0.5, 0, 0.5} against y ∈ {−0.5, 0, 0.5}.
std::vector<ProbePoint> standard_probes();

}  // namespace edgechain
