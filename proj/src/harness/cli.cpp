#include "edgechain/harness/cli.hpp"

#include "edgechain/edgeworth/classical.hpp"
#include "edgechain/errors.hpp"
#include "edgechain/harness/convergence.hpp"
#include "edgechain/kernels/frozen_gaussian.hpp"
#include "edgechain/model/config.hpp"
#include "edgechain/oracle/ck.hpp"
#include "edgechain/parallel.hpp"
#include "edgechain/parametrix/chain.hpp"
#include "edgechain/parametrix/series.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace edgechain {

namespace {

struct Flags {
    std::string config;
    std::string n;
    std::string probes = "standard";
    std::uint64_t seed = 0;
    double tol = 1e-6;
    std::string out;
    std::string format;
    int threads = 0;
    bool timing = false;
    bool check_refinement = false;
    int mc_paths = 0;
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string tok;
    std::istringstream is(s);
    while (std::getline(is, tok, sep)) {
        if (!tok.empty()) out.push_back(tok);
    }
    return out;
}

double number(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) throw ConfigError("bad number in " + what + ": '" + s + "'");
    return v;
}

// "standard", or comma-separated x:y pairs.
std::vector<ProbePoint> parse_probes(const std::string& text) {
    if (text == "standard") return standard_probes();
    std::vector<ProbePoint> out;
    for (const std::string& pair : split(text, ',')) {
        const auto colon = pair.find(':');
        if (colon == std::string::npos) throw ConfigError("probe '" + pair + "' must be x:y");
        out.push_back({number(pair.substr(0, colon), "--probes"), number(pair.substr(colon + 1), "--probes")});
    }
    if (out.empty()) throw ConfigError("--probes is empty");
    return out;
}

std::vector<int> parse_steps(const std::string& text) {
    std::vector<int> out;
    for (const std::string& tok : split(text, ',')) {
        const double v = number(tok, "--n");
        if (v != static_cast<int>(v) || v < 1) throw ConfigError("--n entries must be positive integers");
        out.push_back(static_cast<int>(v));
    }
    return out;
}

QuadratureSpec quadrature(const Flags& f) {
    QuadratureSpec q;
    q.tol_quad = f.tol;
    q.refinement_check = f.check_refinement;
    q.validate();
    return q;
}

ModelPtr load(const Flags& f, bool single_n) {
    ModelSpec spec = load_model_config(f.config);
    if (single_n && !f.n.empty()) {
        const std::vector<int> ns = parse_steps(f.n);
        if (ns.size() != 1) throw ConfigError("--n takes one value for this subcommand");
        spec = spec.with_steps(ns.front());
    }
    spec.check();
    return std::make_shared<ModelSpec>(spec);
}

// Column-oriented table printed as CSV or as a JSON array of objects.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    void write(std::ostream& os, const std::string& format) const {
        if (format == "json") {
            nlohmann::ordered_json j = nlohmann::ordered_json::array();
            for (const auto& r : rows) {
                nlohmann::ordered_json o;
                for (std::size_t c = 0; c < header.size(); ++c) o[header[c]] = r[c];
                j.push_back(o);
            }
            os << j.dump(2) << '\n';
            return;
        }
        os.precision(17);
        for (std::size_t c = 0; c < header.size(); ++c) os << (c ? "," : "") << header[c];
        os << '\n';
        for (const auto& r : rows) {
            for (std::size_t c = 0; c < r.size(); ++c) os << (c ? "," : "") << r[c];
            os << '\n';
        }
    }
};

std::map<double, std::vector<std::size_t>> by_y(const std::vector<ProbePoint>& probes) {
    std::map<double, std::vector<std::size_t>> g;
    for (std::size_t i = 0; i < probes.size(); ++i) g[probes[i].y].push_back(i);
    return g;
}

Table density_table(const ModelPtr& spec, const std::vector<ProbePoint>& probes, const QuadratureSpec& q) {
    const double T = spec->horizon;
    const int n = spec->steps;
    Table t;
    t.header = {"x", "y", "n", "p", "p_h", "p_h_ck", "p_tilde", "p_tilde_h"};
    t.rows.assign(probes.size(), std::vector<double>(t.header.size(), 0.0));
    std::vector<double> xs, ys, all;
    for (const auto& p : probes) {
        xs.push_back(p.x);
        ys.push_back(p.y);
        all.push_back(p.x);
        all.push_back(p.y);
    }
    const ChainAxis axis = chain_axis_for(*spec, all, q);
    QuadratureSpec full = q;
    full.series_rmax = std::max(q.series_rmax, n);
    const std::vector<SeriesResult> ph = parametrix_p_h_batch(spec, 0, n, xs, ys, axis, full);
    for (const auto& [y, idx] : by_y(probes)) {
        std::vector<double> gx;
        for (std::size_t i : idx) gx.push_back(probes[i].x);
        const std::vector<SeriesResult> p = parametrix_p_batch(spec, 0.0, T, gx, y, q);
        for (std::size_t k = 0; k < idx.size(); ++k) t.rows[idx[k]][3] = p[k].value;
    }
    for (std::size_t i = 0; i < probes.size(); ++i) {
        auto& r = t.rows[i];
        r[0] = probes[i].x;
        r[1] = probes[i].y;
        r[2] = n;
        r[4] = ph[i].value;
        r[5] = ck_chain_density_at(*spec, n, probes[i].x, {probes[i].y}, axis).front();
        r[6] = frozen_density(*spec, 0.0, T, probes[i].x, probes[i].y);
        r[7] = frozen_chain_density(*spec, 0, n, probes[i].x, probes[i].y, q);
    }
    return t;
}

Table expand_table(const ModelPtr& spec, const std::vector<ProbePoint>& probes, const QuadratureSpec& q) {
    const double T = spec->horizon;
    Table t;
    t.header = {"x", "y", "n", "pi_tilde_1", "pi_tilde_2", "pi1", "pi2", "p", "corrected"};
    ExpansionEngine engine(spec, q);
    const std::vector<ExpansionTerms> terms = expansion_terms(engine, probes);
    for (std::size_t i = 0; i < probes.size(); ++i) {
        const ExpansionTerms e = terms[i].with_step(spec->h());
        const double x = probes[i].x, y = probes[i].y;
        t.rows.push_back({x, y, static_cast<double>(spec->steps), pi_tilde_1(*spec, 0.0, T, x, y),
                          pi_tilde_2(*spec, 0.0, T, x, y), e.pi1, e.pi2, e.p_value, e.corrected});
    }
    return t;
}

int validate_cmd(const ModelPtr& spec, const Flags& f, std::ostream& os, const std::string& format) {
    const ValidationReport rep = validate_assumptions(*spec, ProbePlan::standard(*spec), f.tol);
    if (format == "csv") {
        os << "name,status,worst,note\n";
        os.precision(17);
        for (const auto& e : rep.entries) os << e.name << ',' << e.status << ',' << e.worst << ",\"" << e.note << "\"\n";
    } else {
        nlohmann::ordered_json j;
        j["model"] = describe_model(*spec);
        j["tolerance"] = f.tol;
        nlohmann::ordered_json entries = nlohmann::ordered_json::array();
        for (const auto& e : rep.entries) {
            entries.push_back({{"name", e.name}, {"status", e.status}, {"worst", e.worst}, {"note", e.note}});
        }
        j["entries"] = entries;
        j["all_passed"] = rep.all_passed();
        os << j.dump(2) << '\n';
    }
    return rep.all_passed() ? exit_ok : exit_checks_failed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Parametrix densities, Edgeworth-type corrections and convergence studies for Markov chains"};
    app.require_subcommand(1);
    Flags f;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", f.config, "model config file")->required();
        sub->add_option("--probes", f.probes, "'standard' or comma-separated x:y pairs");
        sub->add_option("--tol", f.tol, "tol_quad (validate: check tolerance)");
        sub->add_option("--out", f.out, "output file (default stdout)");
        sub->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--threads", f.threads, "worker threads (0 = OpenMP default)");
        sub->add_option("--seed", f.seed, "seed for stochastic checks");
    };
    CLI::App* density = app.add_subcommand("density", "p, p_h, p_tilde and p_tilde_h at the probes");
    CLI::App* expand = app.add_subcommand("expand", "classical and chain correction terms at the probes");
    CLI::App* converge = app.add_subcommand("converge", "weighted expansion error against the CK oracle over n");
    CLI::App* validate = app.add_subcommand("validate", "spot-check the standing assumptions");
    for (CLI::App* sub : {density, expand, converge, validate}) common(sub);
    for (CLI::App* sub : {density, expand}) sub->add_option("--n", f.n, "step count (default from config)");
    converge->add_option("--n", f.n, "comma-separated step counts")->default_str("8,16,32,64");
    for (CLI::App* sub : {density, expand, converge}) {
        sub->add_flag("--check-refinement", f.check_refinement, "recompute at doubled resolution and compare");
    }
    converge->add_flag("--timing", f.timing, "include per-row wall times in JSON");
    converge->add_option("--mc-paths", f.mc_paths, "Monte Carlo spot check paths per row (0 = off)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_config;
    }

    std::ofstream file;
    std::ostream* os = &out;
    if (!f.out.empty()) {
        file.open(f.out);
        if (!file) {
            err << "error: cannot open " << f.out << '\n';
            return exit_config;
        }
        os = &file;
    }
    const int saved_workers = worker_count();
    if (f.threads > 0) set_worker_count(f.threads);
    int code = exit_ok;
    try {
        if (converge->parsed()) {
            ConvergenceOptions o;
            if (!f.n.empty()) o.steps = parse_steps(f.n);
            o.probes = parse_probes(f.probes);
            o.seed = f.seed;
            o.quadrature = quadrature(f);
            o.mc_paths = f.mc_paths;
            const ConvergenceReport rep = run_convergence(load(f, false), o);
            if (f.format == "csv") {
                write_csv(rep, *os);
            } else {
                write_json(rep, *os, f.timing);
            }
            if (!rep.complete()) code = exit_accuracy;
        } else if (validate->parsed()) {
            code = validate_cmd(load(f, false), f, *os, f.format.empty() ? "json" : f.format);
        } else {
            const ModelPtr spec = load(f, true);
            const std::vector<ProbePoint> probes = parse_probes(f.probes);
            const QuadratureSpec q = quadrature(f);
            const Table t = density->parsed() ? density_table(spec, probes, q) : expand_table(spec, probes, q);
            t.write(*os, f.format.empty() ? "csv" : f.format);
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        code = exit_config;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << '\n';
        code = exit_config;
    } catch (const CapabilityError& e) {
        err << "unsupported: " << e.what() << '\n';
        code = exit_config;
    } catch (const AccuracyError& e) {
        err << "accuracy error: " << e.what() << " (coarse " << e.coarse() << ", fine " << e.fine() << ")\n";
        code = exit_accuracy;
    } catch (const Error& e) {
        err << "numerical failure: " << e.what() << '\n';
        code = exit_accuracy;
    }
    set_worker_count(saved_workers);
    return code;
}

}  // namespace edgechain
