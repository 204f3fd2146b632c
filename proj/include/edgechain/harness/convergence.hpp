#pragma once

#include "edgechain/edgeworth/expansion.hpp"
#include "edgechain/harness/rate.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace edgechain {

struct ConvergenceOptions {
    std::vector<int> steps{8, 16, 32, 64};
    std::vector<ProbePoint> probes = standard_probes();
    std::uint64_t seed = 0;
    QuadratureSpec quadrature{};
    ExpansionOptions expansion{};
    double tol_mass = 1e-8;
    /// Monte Carlo paths per row for the independent p_h spot check; 0 skips it.
    int mc_paths = 0;
};

struct ConvergenceRow {
    int n = 0;
    double h = 0.0;
    bool ok = true;
    std::string reason;
    /// Maxima over the probes of |p_h − p|, |p_h − p − √h π₁|, |p_h − corrected|.
    double raw_error = 0.0, first_order_error = 0.0, corrected_error = 0.0;
    /// Same with the envelope weight.
    double weighted_raw = 0.0, weighted_first_order = 0.0, weighted_corrected = 0.0;
    /// Largest |MC − CK| / standard error over the probes (mc_paths > 0).
    double mc_max_z = 0.0;
    double wall_seconds = 0.0;
};

struct SlopeFit {
    /// "ok", "degenerate (errors at noise floor)" or "insufficient rows".
    std::string status;
    RateFit fit{};
};

struct ProbeTerms {
    ProbePoint probe;
    ExpansionTerms terms;
};

struct ConvergenceReport {
    std::string model;
    std::vector<ConvergenceRow> rows;
    std::vector<ProbeTerms> terms;
    SlopeFit raw, first_order, corrected;
    std::uint64_t seed = 0;
    double tol_quad = 0.0, tol_mass = 0.0;
    std::string quadrature;
    std::string oracle_p_h, oracle_terms, oracle_mc;
    bool complete() const;
};

/// Rate study at t = T over the step counts; rows are sorted by n.
ConvergenceReport run_convergence(const ModelPtr& spec, const ConvergenceOptions& options);
ConvergenceReport run_convergence(const std::string& config_path, const ConvergenceOptions& options);

/// Deterministic JSON (wall times only when include_timing).
void write_json(const ConvergenceReport& report, std::ostream& os, bool include_timing = false);
/// n,h,status,raw_error,first_order_error,corrected_error,weighted_raw_error,weighted_first_order_error,weighted_error
void write_csv(const ConvergenceReport& report, std::ostream& os);

}  // namespace edgechain
