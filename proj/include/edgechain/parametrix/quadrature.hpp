#pragma once

#include "edgechain/kernels/space_time_kernel.hpp"
#include "edgechain/model/model_spec.hpp"

#include <string>
#include <vector>

namespace edgechain {

enum class TimeRule {
    /// Composite midpoint rule; never evaluates at the endpoints.
    midpoint,
    /// Split at the midpoint, substitute u = s + v² and u = t − v², Gauss–Legendre in v.
    sqrt_substitution,
};

/// Resolution and tolerance settings shared by convolutions, tables, series and chain grids.
struct QuadratureSpec {
    /// Spatial half-width in standard deviations of the relevant Gaussian factor.
    double space_radius_mult = 8.0;
    /// Trapezoid nodes across a convolution window.
    int space_nodes = 64;
    TimeRule time_rule = TimeRule::sqrt_substitution;
    int time_nodes = 32;
    double tol_quad = 1e-6;
    int series_rmax = 4;
    /// Envelope level below which the parametrix series stops; 0 disables the stopping rule.
    double series_tail_tol = 0.0;
    /// Chebyshev nodes of ScaledField tables (time √elapsed axis and scaled space axis).
    int field_time_nodes = 24;
    int field_space_nodes = 96;
    /// When true, time_space_convolve recomputes at refined() and raises AccuracyError on disagreement.
    bool refinement_check = false;
    /// Chain grids: one-step standard deviation over grid step.
    double chain_nodes_per_sd = 4.0;
    /// Chain grids: half-width in units of √(σ*·T), added around the probe points.
    double chain_radius_mult = 9.0;
    /// Largest Fourier grid (log2 of the point count) for frozen-chain inversion.
    int fourier_max_log2 = 22;

    void validate() const;
    /// Doubles space_nodes and time_nodes; field tables grow by half.
    QuadratureSpec refined() const;
    std::string describe() const;
};

struct TimeNodes {
    std::vector<double> u;
    std::vector<double> w;
};

/// Nodes and weights of the time rule on (s, t).
TimeNodes time_nodes(double s, double t, const QuadratureSpec& q);

/// Uniform trapezoid window for a spatial integral.
struct SpaceWindow {
    double lo = 0.0;
    double hi = 0.0;
    int intervals = 0;
    double step() const { return (hi - lo) / intervals; }
};

/// Window for ∫ f(s,u,x,z) g(u,t,z,y) dz at an interior time u.
SpaceWindow convolution_window(const SpaceTimeKernel& f, const SpaceTimeKernel& g, double s, double u, double t,
                               double x, double y, const QuadratureSpec& q);

}  // namespace edgechain
