#include "edgechain/edgeworth/expansion.hpp"

#include "edgechain/errors.hpp"
#include "edgechain/kernels/frozen_gaussian.hpp"
#include "edgechain/kernels/operators.hpp"
#include "edgechain/model/chain.hpp"
#include "edgechain/oracle/ck.hpp"
#include "edgechain/parametrix/convolution.hpp"
#include "edgechain/parametrix/series.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace edgechain {

ExpansionTerms ExpansionTerms::assemble(double p_value, double pi1, const Pi2Parts& parts, double h,
                                        std::string provenance) {
    ExpansionTerms e;
    e.p_value = p_value;
    e.pi1 = pi1;
    e.parts = parts;
    e.pi2 = parts.total();
    e.corrected = p_value + std::sqrt(h) * pi1 + h * e.pi2;
    e.provenance = std::move(provenance);
    return e;
}

ExpansionTerms ExpansionTerms::with_step(double h) const {
    return assemble(p_value, pi1, parts, h, provenance);
}

ExpansionEngine::ExpansionEngine(ModelPtr spec, QuadratureSpec q, ExpansionOptions options)
    : spec_(std::move(spec)), q_(q), options_(options) {
    q_.validate();
    f1_ = f1_operator(spec_);
    f2_ = f2_operator(spec_, options_.f2_point);
    square_diff_ = square_diff_operator(spec_);
    time_diff_ = time_diff_operator(spec_);
    if (spec_->dim != 1) throw CapabilityError("expansion terms are implemented for d = 1");
}

bool ExpansionEngine::parametrix_trivial() const {
    return q_.series_rmax == 0 || kernel_H(spec_)->identically_zero();
}

std::shared_ptr<const ExpansionEngine::Backward> ExpansionEngine::backward(double s, double t, double y) {
    std::lock_guard<std::mutex> lock(mutex_);
    const auto key = std::make_tuple(s, t, y);
    if (auto it = backward_cache_.find(key); it != backward_cache_.end()) return it->second;

    QuadratureSpec q = q_;
    q.refinement_check = false;
    const Execution exec = options_.exec;
    auto b = std::make_shared<Backward>();
    const KernelPtr ptilde = frozen_density_kernel(spec_);
    const KernelPtr h = kernel_H(spec_);
    const bool trivial = parametrix_trivial();
    if (trivial) {
        b->density = ptilde;
    } else {
        const BackwardChain chain = build_backward_chain(spec_, s, t, y, q.series_rmax, q, exec);
        b->density = backward_density_table(spec_, chain, q, exec);
        b->tables += q.series_rmax;
    }
    if (!f1_->vanishes()) {
        // K = p̃ ⊗ F₁[p] + p̃ ⊗ (Ψ_1 + … + Ψ_R), Ψ_1 = H ⊗ F₁[p], Ψ_r = H ⊗ Ψ_{r−1}.
        std::vector<std::pair<double, KernelPtr>> psi;
        if (!trivial) {
            const FieldGeometry geo = field_geometry(*spec_, FieldAnchor::terminal, t, y, t - s, 3.0, q);
            KernelPtr prev;
            for (int r = 1; r <= q.series_rmax; ++r) {
                auto row = [&](double u, const std::vector<double>& z, std::vector<double>& out) {
                    if (r == 1) {
                        split_convolve_batch(*h, *f1_, *b->density, u, t, z, y, q, out);
                    } else {
                        convolve_batch_left_points(*h, *prev, u, t, z, y, q, out);
                    }
                };
                prev = ScaledField::build(geo, row, spec_.get(), exec);
                psi.emplace_back(1.0, prev);
                ++b->tables;
            }
        }
        const KernelPtr psi_sum = psi.empty() ? zero_kernel() : sum_kernel(std::move(psi));
        const FieldGeometry geo = field_geometry(*spec_, FieldAnchor::terminal, t, y, t - s, 2.0, q);
        auto row = [&](double u, const std::vector<double>& z, std::vector<double>& out) {
            split_convolve_batch(*ptilde, *f1_, *b->density, u, t, z, y, q, out);
            if (psi_sum->identically_zero()) return;
            std::vector<double> rest;
            convolve_batch_left_points(*ptilde, *psi_sum, u, t, z, y, q, rest);
            for (std::size_t j = 0; j < z.size(); ++j) out[j] += rest[j];
        };
        b->inner = ScaledField::build(geo, row, spec_.get(), exec);
        ++b->tables;
    }
    backward_cache_.emplace(key, b);
    return b;
}

KernelPtr ExpansionEngine::forward(double s, double t, double x) {
    if (parametrix_trivial()) return frozen_density_kernel(spec_);
    std::lock_guard<std::mutex> lock(mutex_);
    const auto key = std::make_tuple(s, t, x);
    if (auto it = forward_cache_.find(key); it != forward_cache_.end()) return it->second;
    QuadratureSpec q = q_;
    q.refinement_check = false;
    const ForwardChain chain = build_forward_chain(spec_, s, t, x, q.series_rmax, q, options_.exec);
    KernelPtr k = forward_density_kernel(spec_, chain);
    forward_cache_.emplace(key, k);
    return k;
}

std::vector<double> ExpansionEngine::against(const DifferentialOperator& op, const KernelPtr& base, double s,
                                             double t, const std::vector<double>& xs, double y) {
    QuadratureSpec q = q_;
    q.refinement_check = false;
    std::vector<double> out(xs.size(), 0.0);
    if (op.vanishes()) return out;
    if (parametrix_trivial()) {
        split_convolve_batch(*frozen_density_kernel(spec_), op, *base, s, t, xs, y, q, out);
        return out;
    }
    std::vector<double> one;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        split_convolve_batch(*forward(s, t, xs[i]), op, *base, s, t, {xs[i]}, y, q, one);
        out[i] = one[0];
    }
    return out;
}

std::vector<ExpansionTerms> ExpansionEngine::evaluate_once(double s, double t, const std::vector<double>& xs,
                                                           double y) {
    QuadratureSpec q = q_;
    q.refinement_check = false;
    const std::vector<SeriesResult> p = parametrix_p_batch(spec_, s, t, xs, y, q, options_.exec);
    const auto b = backward(s, t, y);
    const bool trivial = parametrix_trivial();
    const std::vector<double> pi1 = against(*f1_, b->density, s, t, xs, y);
    const std::vector<double> f2 = against(*f2_, b->density, s, t, xs, y);
    const std::vector<double> nest =
        b->inner ? against(*f1_, b->inner, s, t, xs, y) : std::vector<double>(xs.size(), 0.0);
    const std::vector<double> sd = against(*square_diff_, b->density, s, t, xs, y);
    const std::vector<double> td = against(*time_diff_, b->density, s, t, xs, y);

    std::vector<ExpansionTerms> out;
    out.reserve(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        std::ostringstream prov;
        prov << "p: parametrix r_used=" << p[i].r_used << " tail_bound=" << p[i].tail_bound
             << "; factors: density summed to r=" << (trivial ? 0 : q.series_rmax) << ", " << b->tables
             << " backward tables; F2 cumulants at " << (options_.f2_point == F2Point::integration ? "integration point" : "terminal point")
             << "; quadrature: " << q.describe();
        Pi2Parts parts{f2[i], nest[i], sd[i], td[i]};
        out.push_back(ExpansionTerms::assemble(p[i].value, pi1[i], parts, spec_->h(), prov.str()));
    }
    return out;
}

std::vector<ExpansionTerms> ExpansionEngine::evaluate(double s, double t, const std::vector<double>& xs, double y) {
    if (!(t > s)) throw DomainError("expansion terms need s < t");
    if (t > spec_->horizon * (1.0 + 1e-12)) throw DomainError("expansion terms need t <= T");
    std::vector<ExpansionTerms> coarse = evaluate_once(s, t, xs, y);
    if (!q_.refinement_check) return coarse;
    if (!fine_) {
        QuadratureSpec fq = q_.refined();
        fq.refinement_check = false;
        fine_ = std::make_unique<ExpansionEngine>(spec_, fq, options_);
    }
    std::vector<ExpansionTerms> fine = fine_->evaluate_once(s, t, xs, y);
    const double tol = 10.0 * q_.tol_quad;
    auto check = [&](const char* name, double c, double f) {
        if (std::abs(c - f) > tol * std::max(1.0, std::abs(f))) throw AccuracyError(std::string(name) + " did not converge under refinement", c, f);
    };
    for (std::size_t i = 0; i < xs.size(); ++i) {
        check("p", coarse[i].p_value, fine[i].p_value);
        check("pi1", coarse[i].pi1, fine[i].pi1);
        check("pi2 F2 term", coarse[i].parts.f2, fine[i].parts.f2);
        check("pi2 nested term", coarse[i].parts.nested, fine[i].parts.nested);
        check("pi2 square-difference term", coarse[i].parts.square_diff, fine[i].parts.square_diff);
        check("pi2 time-derivative term", coarse[i].parts.time_diff, fine[i].parts.time_diff);
    }
    return fine;
}

ExpansionTerms ExpansionEngine::evaluate(double s, double t, double x, double y) {
    return evaluate(s, t, std::vector<double>{x}, y).front();
}

double pi_1(const ModelPtr& spec, double s, double t, double x, double y, const QuadratureSpec& q,
            const ExpansionOptions& options) {
    ExpansionEngine engine(spec, q, options);
    return engine.evaluate(s, t, x, y).pi1;
}

double pi_2(const ModelPtr& spec, double s, double t, double x, double y, const QuadratureSpec& q,
            const ExpansionOptions& options) {
    ExpansionEngine engine(spec, q, options);
    return engine.evaluate(s, t, x, y).pi2;
}

std::vector<ProbePoint> standard_probes() {
    std::vector<ProbePoint> out;
    for (double x : {-0.5, 0.0, 0.5}) {
        for (double y : {-0.5, 0.0, 0.5}) out.push_back({x, y});
    }
    return out;
}

ExpansionError expansion_error(const ModelPtr& spec, const std::vector<ProbePoint>& probes, const QuadratureSpec& q,
                               const ExpansionOptions& options, double tol_mass) {
    ExpansionEngine engine(spec, q, options);
    return expansion_error(engine, spec->steps, probes, tol_mass);
}

ExpansionError expansion_error(ExpansionEngine& engine, int steps, const std::vector<ProbePoint>& probes,
                               double tol_mass) {
    return expansion_error(engine.model(), steps, probes, expansion_terms(engine, probes), engine.quadrature(), tol_mass,
                           engine.options().exec);
}

std::vector<ExpansionTerms> expansion_terms(ExpansionEngine& engine, const std::vector<ProbePoint>& probes) {
    const double T = engine.model().horizon;
    std::vector<ExpansionTerms> out(probes.size());
    std::vector<double> ys;
    for (const auto& p : probes) {
        if (std::find(ys.begin(), ys.end(), p.y) == ys.end()) ys.push_back(p.y);
    }
    for (double y : ys) {
        std::vector<double> xs;
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < probes.size(); ++i) {
            if (probes[i].y == y) {
                xs.push_back(probes[i].x);
                idx.push_back(i);
            }
        }
        const std::vector<ExpansionTerms> terms = engine.evaluate(0.0, T, xs, y);
        for (std::size_t k = 0; k < idx.size(); ++k) out[idx[k]] = terms[k];
    }
    return out;
}

ExpansionError expansion_error(const ModelSpec& model, int steps, const std::vector<ProbePoint>& probes,
                               const std::vector<ExpansionTerms>& terms, const QuadratureSpec& q, double tol_mass,
                               Execution exec) {
    if (terms.size() != probes.size()) throw DomainError("expansion_error needs one term set per probe");
    const ModelSpec chain = model.with_steps(steps);
    const double T = chain.horizon;
    const double h = chain.h();
    ExpansionError err;
    err.points.resize(probes.size());
    std::vector<double> xs_distinct, all;
    for (std::size_t i = 0; i < probes.size(); ++i) {
        const auto& p = probes[i];
        if (std::find(xs_distinct.begin(), xs_distinct.end(), p.x) == xs_distinct.end()) xs_distinct.push_back(p.x);
        all.push_back(p.x);
        all.push_back(p.y);
        err.points[i].terms = terms[i].with_step(h);
    }

    const ChainAxis axis = make_chain_axis(chain, all, q.chain_nodes_per_sd, q.chain_radius_mult);
    for (double x : xs_distinct) {
        std::vector<double> yq;
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < probes.size(); ++i) {
            if (probes[i].x == x) {
                yq.push_back(probes[i].y);
                idx.push_back(i);
            }
        }
        const std::vector<double> ph = ck_chain_density_at(chain, steps, x, yq, axis, tol_mass, exec);
        for (std::size_t k = 0; k < idx.size(); ++k) err.points[idx[k]].p_h = ph[k];
    }

    const int sp = chain.envelope_order();
    for (std::size_t i = 0; i < probes.size(); ++i) {
        ExpansionErrorPoint& pt = err.points[i];
        pt.x = probes[i].x;
        pt.y = probes[i].y;
        pt.weight = std::sqrt(T) * (1.0 + std::pow(std::abs(pt.y - pt.x) / std::sqrt(T), sp));
        pt.raw = std::abs(pt.p_h - pt.terms.p_value);
        pt.first_order = std::abs(pt.p_h - (pt.terms.p_value + std::sqrt(h) * pt.terms.pi1));
        pt.corrected = std::abs(pt.p_h - pt.terms.corrected);
        err.weighted_raw = std::max(err.weighted_raw, pt.weight * pt.raw);
        err.weighted_first_order = std::max(err.weighted_first_order, pt.weight * pt.first_order);
        err.weighted_corrected = std::max(err.weighted_corrected, pt.weight * pt.corrected);
    }
    std::ostringstream os;
    os << "chapman-kolmogorov grid: step " << axis.step << ", " << axis.n << " nodes, tol_mass " << tol_mass;
    err.oracle = os.str();
    return err;
}

}  // namespace edgechain
