#pragma once

#include "edgechain/kernels/space_time_kernel.hpp"
#include "edgechain/model/model_spec.hpp"
#include "edgechain/parallel.hpp"

#include <functional>
#include <iosfwd>
#include <memory>
#include <vector>

namespace edgechain {

/// Which end of the kernel is held fixed by a table.
enum class FieldAnchor {
    /// z ↦ f(u, t, z, y) for fixed (t, y); used as a right factor.
    terminal,
    /// z ↦ f(s, u, x, z) for fixed (s, x); used as a left factor.
    initial,
};

/// Shape of a table in scaled coordinates τ = √elapsed, ζ = (z − c(τ)) / (scale·τ).
struct FieldGeometry {
    FieldAnchor anchor = FieldAnchor::terminal;
    double anchor_time = 0.0;
    double anchor_point = 0.0;
    /// Largest elapsed time covered by the table.
    double extent = 1.0;
    /// Standard-deviation scale of ζ (typically √σ*).
    double scale = 1.0;
    /// c(τ) = anchor_point − drift·τ² (terminal) or anchor_point + drift·τ² (initial).
    double drift = 0.0;
    /// Stored quantity τ^alpha·f; chosen to cancel the small-time singularity.
    double alpha = 1.0;
    int n_tau = 24;
    int n_zeta = 96;
    /// ζ ∈ [−zeta_radius, zeta_radius]; the kernel is taken as 0 outside.
    double zeta_radius = 8.0;
};

/// A kernel tabulated on a Chebyshev product grid in (τ, ζ), with barycentric interpolation
/// in τ and a Chebyshev series in ζ (so right sections have spectral derivatives).
class ScaledField final : public SpaceTimeKernel {
  public:
    /// Fills out[j] = f at time u and points z[j] (both in original coordinates).
    using RowFunction = std::function<void(double u, const std::vector<double>& z, std::vector<double>& out)>;

    static std::shared_ptr<const ScaledField> build(const FieldGeometry& geometry, const RowFunction& row,
                                                    const ModelSpec* model, Execution exec = Execution::parallel);

    double eval(double s, double t, double x, double y) const override;
    double deriv(int k, double s, double t, double x, double y) const override;
    int max_deriv_order() const override;
    SectionPtr right_section(double u, double t, double y) const override;
    SectionPtr left_section(double s, double u, double x) const override;
    const ModelSpec* model() const override { return model_; }

    const FieldGeometry& geometry() const { return geo_; }
    const std::vector<double>& tau_nodes() const { return tau_; }
    /// Stored values τ_i^alpha·f, row-major with n_zeta columns.
    const std::vector<double>& node_values() const { return data_; }
    /// Original-coordinate time and point of node (i, j).
    double node_time(int i) const;
    double node_point(int i, int j) const;
    /// CSV rows "s,t,x,y,value" over all nodes.
    void dump_csv(std::ostream& os) const;

    /// Section at elapsed time e from the anchor (free argument in original coordinates).
    SectionPtr section_at(double elapsed) const;

  private:
    ScaledField() = default;
    double center(double tau) const;

    FieldGeometry geo_{};
    const ModelSpec* model_ = nullptr;
    std::vector<double> tau_, bary_, zeta_hat_, dct_, data_;
    friend class FieldSection;
};

using FieldPtr = std::shared_ptr<const ScaledField>;

}  // namespace edgechain
