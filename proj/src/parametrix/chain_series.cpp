#include "edgechain/errors.hpp"
#include "edgechain/model/chain.hpp"
#include "edgechain/parametrix/chain.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace edgechain {

ChainAxis chain_axis_for(const ModelSpec& spec, const std::vector<double>& points, const QuadratureSpec& q) {
    return make_chain_axis(spec, points, q.chain_nodes_per_sd, q.chain_radius_mult);
}

namespace {

struct Range {
    int lo = 0, hi = -1;
    int size() const { return hi - lo + 1; }
};

// Discrete parametrix series from a fixed start index j to terminal columns, on one chain grid.
//
// For a terminal (l, w), Λ_i(z) = p̃_h^w(ih, lh, z, w) is built backward from Λ_{l−1} = p̃^w_1(l−1; ·, w)
// by Λ_i = p̃^w_1(i) W Λ_{i+1}, and h·H_h(i, l, z, w) = (P_i W Λ_{i+1})(z) − Λ_i(z). The orders follow
//   G_0(l, w) = Λ_j(x),
//   G_r(l, w) = [r = 1]·h·H_h(j, l, x, w) + Σ_{i=j+1}^{l−1} h Σ_z W_z G_{r−1}(i, z) H_h(i, l, z, w).
class ChainSeries {
  public:
    ChainSeries(const ModelSpec& spec, int j, int k, const ChainAxis& axis, const QuadratureSpec& q,
                std::vector<double> starts)
        : spec_(spec), j_(j), k_(k), axis_(axis), q_(q), xs_(std::move(starts)) {
        h_ = spec.h();
        n_ = axis.n;
        const double tail = spec.innovations.tail_reach;
        diffusive_ = tail * q.space_radius_mult * std::sqrt(spec.ellipticity.upper * h_) / axis.step;
        drift_ = spec.drift.abs_bound(std::max(std::abs(axis.lo), std::abs(axis.hi()))) * h_ / axis.step;
        band_ = reach(1);
        weights_.resize(n_);
        for (int a = 0; a < n_; ++a) weights_[a] = axis.weight(a);
        const int width = 2 * band_ + 1;
        step_.assign(k - j, {});
        for (int i = j; i < k; ++i) {
            std::vector<double>& m = step_[i - j];
            m.assign(static_cast<std::size_t>(n_) * width, 0.0);
            for (int a = 0; a < n_; ++a) {
                for (int d = -band_; d <= band_; ++d) {
                    const int b = a + d;
                    if (b < 0 || b >= n_) continue;
                    m[static_cast<std::size_t>(a) * width + d + band_] =
                        chain_step_density(spec, i, axis.node(a), axis.node(b));
                }
            }
        }
        start_step_.resize(xs_.size());
        for (std::size_t p = 0; p < xs_.size(); ++p) {
            start_step_[p].resize(n_);
            for (int b = 0; b < n_; ++b) start_step_[p][b] = chain_step_density(spec, j, xs_[p], axis.node(b));
        }
        const int orders = k - j + 1;
        g_.assign(xs_.size(), std::vector<double>(static_cast<std::size_t>(orders) * (k - j) * n_, 0.0));
    }

    // Fill G for all grid columns at every intermediate time index l in (j, k).
    void run_interior(Execution exec) {
        for (int l = j_ + 1; l < k_; ++l) {
#pragma omp parallel for schedule(dynamic, 16) if (exec == Execution::parallel)
            for (int c = 0; c < n_; ++c) {
                Scratch sc;
                std::vector<std::vector<double>> out;
                column(l, axis_.node(c), c, true, sc, out);
                for (std::size_t p = 0; p < xs_.size(); ++p) {
                    for (int r = 0; r <= l - j_; ++r) at(p, r, l, c) = out[p][r];
                }
            }
        }
    }

    // Orders r = 0..k−j at terminal point w, one vector per start.
    std::vector<std::vector<double>> terminal(double w) const {
        Scratch sc;
        std::vector<std::vector<double>> out;
        const int c = static_cast<int>(std::lround((w - axis_.lo) / axis_.step));
        column(k_, w, std::clamp(c, 0, n_ - 1), false, sc, out);
        return out;
    }

  private:
    struct Scratch {
        std::vector<std::vector<double>> lam, hv;
        std::vector<Range> range;
        std::vector<double> kern;
    };

    int reach(int steps) const {
        return static_cast<int>(std::ceil(diffusive_ * std::sqrt(static_cast<double>(steps)) + drift_ * steps)) + 1;
    }

    Range range_for(int center, int steps) const {
        const int r = reach(steps);
        return {std::max(0, center - r), std::min(n_ - 1, center + r)};
    }

    double& at(std::size_t p, int r, int l, int a) {
        return g_[p][(static_cast<std::size_t>(r) * (k_ - j_) + (l - j_)) * n_ + a];
    }
    double at(std::size_t p, int r, int l, int a) const {
        return g_[p][(static_cast<std::size_t>(r) * (k_ - j_) + (l - j_)) * n_ + a];
    }

    void column(int l, double w, int center, bool on_grid, Scratch& sc, std::vector<std::vector<double>>& out) const {
        const int rows = l - j_;  // indices j..l−1
        sc.lam.assign(rows, {});
        sc.hv.assign(rows, {});
        sc.range.assign(rows, {});
        const int width = 2 * band_ + 1;
        // Row i = l − 1.
        if (l - 1 > j_) {
            const int i = l - 1;
            Range rg = range_for(center, 1);
            sc.range[i - j_] = rg;
            std::vector<double>& lam = sc.lam[i - j_];
            std::vector<double>& hv = sc.hv[i - j_];
            lam.resize(rg.size());
            hv.resize(rg.size());
            for (int a = rg.lo; a <= rg.hi; ++a) {
                const double z = axis_.node(a);
                const double frozen = frozen_step_density(spec_, i, z, w, w);
                double chain;
                if (on_grid && std::abs(a - center) <= band_) {
                    chain = step_[i - j_][static_cast<std::size_t>(a) * width + (center - a) + band_];
                } else {
                    chain = chain_step_density(spec_, i, z, w);
                }
                lam[a - rg.lo] = frozen;
                hv[a - rg.lo] = (chain - frozen) / h_;
            }
        }
        // Rows i = l − 2 .. j + 1.
        sc.kern.resize(width);
        for (int i = l - 2; i > j_; --i) {
            for (int d = -band_; d <= band_; ++d) sc.kern[d + band_] = frozen_step_density(spec_, i, 0.0, d * axis_.step, w);
            const Range prev = sc.range[i + 1 - j_];
            const std::vector<double>& lp = sc.lam[i + 1 - j_];
            Range rg = range_for(center, l - i);
            sc.range[i - j_] = rg;
            std::vector<double>& lam = sc.lam[i - j_];
            std::vector<double>& hv = sc.hv[i - j_];
            lam.assign(rg.size(), 0.0);
            hv.assign(rg.size(), 0.0);
            const double* pm = step_[i - j_].data();
            for (int a = rg.lo; a <= rg.hi; ++a) {
                const int blo = std::max(prev.lo, a - band_), bhi = std::min(prev.hi, a + band_);
                double fz = 0.0, ch = 0.0;
                const double* prow = pm + static_cast<std::size_t>(a) * width + band_ - a;
                for (int b = blo; b <= bhi; ++b) {
                    const double v = weights_[b] * lp[b - prev.lo];
                    fz += sc.kern[b - a + band_] * v;
                    ch += prow[b] * v;
                }
                lam[a - rg.lo] = fz;
                hv[a - rg.lo] = (ch - fz) / h_;
            }
        }
        // Start rows and orders.
        out.assign(xs_.size(), std::vector<double>(l - j_ + 1, 0.0));
        for (std::size_t p = 0; p < xs_.size(); ++p) {
            const double x = xs_[p];
            double lam_j, chain_j;
            if (l == j_ + 1) {
                lam_j = frozen_step_density(spec_, j_, x, w, w);
                chain_j = chain_step_density(spec_, j_, x, w);
            } else {
                const Range rg = sc.range[1];
                const std::vector<double>& lp = sc.lam[1];
                lam_j = 0.0;
                chain_j = 0.0;
                for (int b = rg.lo; b <= rg.hi; ++b) {
                    const double v = weights_[b] * lp[b - rg.lo];
                    lam_j += frozen_step_density(spec_, j_, x, axis_.node(b), w) * v;
                    chain_j += start_step_[p][b] * v;
                }
            }
            std::vector<double>& o = out[p];
            o[0] = lam_j;
            o[1] = chain_j - lam_j;
            for (int i = j_ + 1; i < l; ++i) {
                const Range rg = sc.range[i - j_];
                const std::vector<double>& hv = sc.hv[i - j_];
                for (int r = 1; r <= i - j_ + 1 && r <= l - j_; ++r) {
                    double acc = 0.0;
                    for (int a = rg.lo; a <= rg.hi; ++a) acc += weights_[a] * at(p, r - 1, i, a) * hv[a - rg.lo];
                    o[r] += h_ * acc;
                }
            }
        }
    }

    const ModelSpec& spec_;
    int j_, k_;
    ChainAxis axis_;
    QuadratureSpec q_;
    std::vector<double> xs_;
    double h_ = 0.0, diffusive_ = 0.0, drift_ = 0.0;
    int n_ = 0, band_ = 0;
    std::vector<double> weights_;
    std::vector<std::vector<double>> step_;
    std::vector<std::vector<double>> start_step_;
    std::vector<std::vector<double>> g_;
};

SeriesResult truncate_terms(std::vector<double> terms, const QuadratureSpec& q) {
    SeriesResult res;
    const int top = static_cast<int>(terms.size()) - 1;
    std::vector<double> tail(terms.size() + 1, 0.0);
    for (int r = top; r >= 0; --r) tail[r] = tail[r + 1] + std::abs(terms[r]);
    int r_used = std::min(q.series_rmax, top);
    if (q.series_tail_tol > 0.0) {
        int first = -1;
        for (int r = 0; r <= r_used; ++r) {
            if (tail[r + 1] < q.series_tail_tol) {
                first = r;
                break;
            }
        }
        if (first < 0) throw TruncationError("chain series tail above tolerance at series_rmax", tail[r_used + 1]);
        r_used = first;
    }
    res.r_used = r_used;
    res.tail_bound = tail[r_used + 1];
    for (int r = 0; r <= r_used; ++r) res.value += terms[r];
    res.terms = std::move(terms);
    return res;
}

}  // namespace

std::vector<SeriesResult> parametrix_p_h_batch(const ModelPtr& spec, int j, int k, const std::vector<double>& xs,
                                               const std::vector<double>& ys, const ChainAxis& axis,
                                               const QuadratureSpec& q, Execution exec) {
    q.validate();
    if (spec->dim != 1) throw CapabilityError("chain series is implemented for d = 1");
    if (j < 0 || k <= j || k > spec->steps) throw DomainError("parametrix_p_h needs 0 <= j < k <= n");
    if (xs.size() != ys.size()) throw DomainError("parametrix_p_h_batch needs matching x and y lists");
    std::vector<double> starts;
    std::map<double, std::size_t> start_index;
    for (double x : xs) {
        if (start_index.emplace(x, starts.size()).second) starts.push_back(x);
    }
    ChainSeries series(*spec, j, k, axis, q, starts);
    series.run_interior(exec);
    std::map<double, std::vector<std::vector<double>>> columns;
    for (double y : ys) {
        if (!columns.count(y)) columns.emplace(y, series.terminal(y));
    }
    std::vector<SeriesResult> out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        out.push_back(truncate_terms(columns.at(ys[i])[start_index.at(xs[i])], q));
    }
    return out;
}

std::vector<SeriesResult> parametrix_p_h_batch(const ModelPtr& spec, int j, int k, const std::vector<double>& xs,
                                               const std::vector<double>& ys, const QuadratureSpec& q,
                                               Execution exec) {
    std::vector<double> pts(xs);
    pts.insert(pts.end(), ys.begin(), ys.end());
    if (pts.empty()) return {};
    return parametrix_p_h_batch(spec, j, k, xs, ys, chain_axis_for(*spec, pts, q), q, exec);
}

SeriesResult parametrix_p_h(const ModelPtr& spec, int j, int k, double x, double y, const QuadratureSpec& q,
                            Execution exec) {
    return parametrix_p_h_batch(spec, j, k, {x}, {y}, q, exec).front();
}

}  // namespace edgechain
