#include "edgechain/harness/convergence.hpp"

#include "edgechain/errors.hpp"
#include "edgechain/model/config.hpp"
#include "edgechain/oracle/monte_carlo.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>

namespace edgechain {

namespace {

SlopeFit fit_column(const std::vector<ConvergenceRow>& rows, double ConvergenceRow::*field, double floor) {
    std::vector<std::pair<double, double>> pts;
    bool above_floor = false;
    for (const auto& r : rows) {
        if (!r.ok) continue;
        if (r.*field > floor) above_floor = true;
        pts.emplace_back(r.h, r.*field);
    }
    SlopeFit out;
    if (pts.size() < 3) {
        out.status = "insufficient rows";
        return out;
    }
    if (!above_floor || std::any_of(pts.begin(), pts.end(), [](const auto& p) { return !(p.second > 0.0); })) {
        out.status = "degenerate (errors at noise floor)";
        return out;
    }
    out.status = "ok";
    out.fit = fit_rate(pts);
    return out;
}

double mc_check(const ModelSpec& chain, const std::vector<ProbePoint>& probes, const ExpansionError& err,
                const ConvergenceOptions& o) {
    std::vector<double> xs;
    for (const auto& p : probes) {
        if (std::find(xs.begin(), xs.end(), p.x) == xs.end()) xs.push_back(p.x);
    }
    double worst = 0.0;
    for (std::size_t g = 0; g < xs.size(); ++g) {
        std::vector<double> ys;
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < probes.size(); ++i) {
            if (probes[i].x == xs[g]) {
                ys.push_back(probes[i].y);
                idx.push_back(i);
            }
        }
        const MonteCarloEstimate mc =
            mc_chain_density(chain, chain.steps, xs[g], ys, o.mc_paths, 0.0, path_seed(o.seed, g), Execution::serial);
        for (std::size_t k = 0; k < idx.size(); ++k) {
            worst = std::max(worst, std::abs(mc.values[k] - err.points[idx[k]].p_h) / mc.std_errors[k]);
        }
    }
    return worst;
}

}  // namespace

bool ConvergenceReport::complete() const {
    return std::all_of(rows.begin(), rows.end(), [](const ConvergenceRow& r) { return r.ok; });
}

ConvergenceReport run_convergence(const ModelPtr& spec, const ConvergenceOptions& o) {
    if (o.steps.size() < 3) throw DomainError("convergence study needs at least 3 step counts");
    for (int n : o.steps) {
        if (n < 8) throw DomainError("convergence step counts must be >= 8");
    }
    if (o.probes.empty()) throw DomainError("convergence study needs probes");
    std::vector<int> ns = o.steps;
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());

    ConvergenceReport rep;
    rep.model = describe_model(*spec);
    rep.seed = o.seed;
    rep.tol_quad = o.quadrature.tol_quad;
    rep.tol_mass = o.tol_mass;
    rep.quadrature = o.quadrature.describe();
    rep.rows.resize(ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i) {
        rep.rows[i].n = ns[i];
        rep.rows[i].h = spec->horizon / ns[i];
    }

    // p, π₁ and π₂ do not depend on n.
    std::vector<ExpansionTerms> terms;
    try {
        ExpansionEngine engine(spec, o.quadrature, o.expansion);
        terms = expansion_terms(engine, o.probes);
    } catch (const Error& e) {
        for (auto& r : rep.rows) {
            r.ok = false;
            r.reason = std::string("expansion terms: ") + e.what();
        }
    }
    if (!terms.empty()) {
        rep.oracle_terms = terms.front().provenance;
        for (std::size_t i = 0; i < o.probes.size(); ++i) rep.terms.push_back({o.probes[i], terms[i]});
        std::vector<std::string> oracles(ns.size());
#pragma omp parallel for schedule(dynamic, 1)
        for (std::size_t i = 0; i < ns.size(); ++i) {
            ConvergenceRow& r = rep.rows[i];
            const auto t0 = std::chrono::steady_clock::now();
            try {
                const ExpansionError err =
                    expansion_error(*spec, r.n, o.probes, terms, o.quadrature, o.tol_mass, o.expansion.exec);
                for (const auto& pt : err.points) {
                    r.raw_error = std::max(r.raw_error, pt.raw);
                    r.first_order_error = std::max(r.first_order_error, pt.first_order);
                    r.corrected_error = std::max(r.corrected_error, pt.corrected);
                }
                r.weighted_raw = err.weighted_raw;
                r.weighted_first_order = err.weighted_first_order;
                r.weighted_corrected = err.weighted_corrected;
                oracles[i] = err.oracle;
                if (o.mc_paths > 0) r.mc_max_z = mc_check(spec->with_steps(r.n), o.probes, err, o);
            } catch (const Error& e) {
                r.ok = false;
                r.reason = e.what();
            }
            r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        }
        std::ostringstream os;
        for (std::size_t i = 0; i < ns.size(); ++i) {
            if (oracles[i].empty()) continue;
            if (os.tellp() > 0) os << "; ";
            os << "n=" << ns[i] << ": " << oracles[i];
        }
        rep.oracle_p_h = os.str();
    }
    if (o.mc_paths > 0) {
        std::ostringstream os;
        os << "monte carlo: " << o.mc_paths << " paths, seed " << o.seed << ", bandwidth 0.8 x Silverman";
        rep.oracle_mc = os.str();
    }

    const double floor = 10.0 * o.quadrature.tol_quad;
    rep.raw = fit_column(rep.rows, &ConvergenceRow::weighted_raw, floor);
    rep.first_order = fit_column(rep.rows, &ConvergenceRow::weighted_first_order, floor);
    rep.corrected = fit_column(rep.rows, &ConvergenceRow::weighted_corrected, floor);
    return rep;
}

ConvergenceReport run_convergence(const std::string& config_path, const ConvergenceOptions& options) {
    auto spec = std::make_shared<ModelSpec>(load_model_config(config_path));
    return run_convergence(spec, options);
}

void write_json(const ConvergenceReport& rep, std::ostream& os, bool include_timing) {
    using nlohmann::ordered_json;
    auto slope = [](const SlopeFit& s) {
        ordered_json j;
        j["status"] = s.status;
        if (s.status == "ok") {
            j["slope"] = s.fit.slope;
            j["stderr"] = s.fit.stderr_slope;
        }
        return j;
    };
    ordered_json j;
    j["schema"] = "edgechain.convergence/1";
    j["model"] = rep.model;
    j["seed"] = rep.seed;
    j["tolerances"] = {{"tol_quad", rep.tol_quad}, {"tol_mass", rep.tol_mass}, {"quadrature", rep.quadrature}};
    ordered_json oracles;
    oracles["p_h"] = rep.oracle_p_h;
    oracles["terms"] = rep.oracle_terms;
    if (!rep.oracle_mc.empty()) oracles["monte_carlo"] = rep.oracle_mc;
    j["oracles"] = oracles;
    ordered_json terms = ordered_json::array();
    for (const auto& t : rep.terms) {
        terms.push_back({{"x", t.probe.x},
                         {"y", t.probe.y},
                         {"p", t.terms.p_value},
                         {"pi1", t.terms.pi1},
                         {"pi2", t.terms.pi2},
                         {"pi2_parts",
                          {{"f2", t.terms.parts.f2},
                           {"nested", t.terms.parts.nested},
                           {"square_diff", t.terms.parts.square_diff},
                           {"time_diff", t.terms.parts.time_diff}}}});
    }
    j["terms"] = terms;
    ordered_json rows = ordered_json::array();
    for (const auto& r : rep.rows) {
        ordered_json row;
        row["n"] = r.n;
        row["h"] = r.h;
        row["status"] = r.ok ? "ok" : "failed";
        if (!r.ok) row["reason"] = r.reason;
        row["raw_error"] = r.raw_error;
        row["first_order_error"] = r.first_order_error;
        row["corrected_error"] = r.corrected_error;
        row["weighted_raw_error"] = r.weighted_raw;
        row["weighted_first_order_error"] = r.weighted_first_order;
        row["weighted_error"] = r.weighted_corrected;
        if (!rep.oracle_mc.empty()) row["mc_max_z"] = r.mc_max_z;
        if (include_timing) row["wall_seconds"] = r.wall_seconds;
        rows.push_back(row);
    }
    j["rows"] = rows;
    j["slopes"] = {{"raw", slope(rep.raw)}, {"first_order", slope(rep.first_order)}, {"corrected", slope(rep.corrected)}};
    j["complete"] = rep.complete();
    os << j.dump(2) << '\n';
}

void write_csv(const ConvergenceReport& rep, std::ostream& os) {
    os << "n,h,status,raw_error,first_order_error,corrected_error,weighted_raw_error,weighted_first_order_error,"
          "weighted_error\n";
    os.precision(17);
    for (const auto& r : rep.rows) {
        os << r.n << ',' << r.h << ',' << (r.ok ? "ok" : "failed") << ',' << r.raw_error << ',' << r.first_order_error
           << ',' << r.corrected_error << ',' << r.weighted_raw << ',' << r.weighted_first_order << ','
           << r.weighted_corrected << '\n';
    }
}

}  // namespace edgechain
