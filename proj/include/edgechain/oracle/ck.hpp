#pragma once

#include "edgechain/model/chain.hpp"
#include "edgechain/model/model_spec.hpp"
#include "edgechain/parallel.hpp"

#include <iosfwd>
#include <vector>

namespace edgechain {

/// Chain density p_h(0, kh, x, ·) on the nodes of a grid.
struct DensityGrid {
    ChainAxis axis;
    std::vector<double> values;
    int step_index = 0;
    /// Trapezoid integral of values.
    double mass = 0.0;
    /// Trapezoid mass within one step-reach of either end of the grid.
    double boundary_mass = 0.0;
    /// Most negative node value (0 when none).
    double min_value = 0.0;

    /// CSV "node,value".
    void write_csv(std::ostream& os) const;
};

/// Spatial rule of each Chapman–Kolmogorov step.
enum class CellRule {
    /// Trapezoid, with grid cells that contain a jump of the integrand split at the jump.
    breakpoint_corrected,
    /// Plain trapezoid on the nodes (the discretization the grid parametrix series uses).
    trapezoid,
};

/// Direct Chapman–Kolmogorov recursion: v_1 = P_0(x, ·), v_{i+1}(w) = Σ_z W_z v_i(z) P_i(z, w).
/// Raises GridExtentError when boundary_mass exceeds tol_mass.
DensityGrid ck_chain_density(const ModelSpec& spec, int k, double x, const ChainAxis& axis, double tol_mass = 1e-8,
                             Execution exec = Execution::parallel, CellRule rule = CellRule::breakpoint_corrected);

/// p_h(0, kh, x, y) at off-grid points: recursion to step k − 1, then the last step evaluated exactly at y.
std::vector<double> ck_chain_density_at(const ModelSpec& spec, int k, double x, const std::vector<double>& ys,
                                        const ChainAxis& axis, double tol_mass = 1e-8,
                                        Execution exec = Execution::parallel,
                                        CellRule rule = CellRule::breakpoint_corrected);

}  // namespace edgechain
