#include "edgechain/model/config.hpp"

#include "edgechain/errors.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace edgechain {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_number(const std::string& key, const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw ConfigError("value of '" + key + "' is not a number: '" + text + "'");
    }
    if (used != text.size()) throw ConfigError("value of '" + key + "' is not a number: '" + text + "'");
    return v;
}

int to_integer(const std::string& key, const std::string& text) {
    const double v = to_number(key, text);
    if (v != static_cast<int>(v)) throw ConfigError("value of '" + key + "' must be an integer");
    return static_cast<int>(v);
}

struct PresetLine {
    std::string name;
    std::map<std::string, double> params;
};

PresetLine parse_preset(const std::string& key, const std::string& text) {
    std::istringstream is(text);
    PresetLine p;
    if (!(is >> p.name)) throw ConfigError("'" + key + "' needs a preset name");
    std::string tok;
    while (is >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw ConfigError("preset parameter '" + tok + "' must be name=value");
        const std::string k = tok.substr(0, eq);
        if (p.params.count(k)) throw ConfigError("duplicate preset parameter '" + k + "'");
        p.params[k] = to_number(key + "." + k, tok.substr(eq + 1));
    }
    return p;
}

Coefficient build_coefficient(const std::string& key, const PresetLine& p) {
    const Coefficient::Kind kind = coefficient_kind_from_name(p.name);
    std::set<std::string> allowed;
    switch (kind) {
        case Coefficient::Kind::constant: allowed = {"level"}; break;
        case Coefficient::Kind::affine_t: allowed = {"level", "slope_t"}; break;
        case Coefficient::Kind::tanh_x:
        case Coefficient::Kind::sine_x: allowed = {"level", "amplitude", "rate", "slope_t"}; break;
        case Coefficient::Kind::ou_linear: allowed = {"level", "rate"}; break;
    }
    for (const auto& [k, v] : p.params) {
        if (!allowed.count(k)) throw ConfigError("unknown parameter '" + k + "' for " + key + " preset " + p.name);
    }
    auto get = [&](const char* k, double def) {
        auto it = p.params.find(k);
        return it == p.params.end() ? def : it->second;
    };
    Coefficient c;
    c.kind = kind;
    c.level = get("level", 0.0);
    c.slope_t = get("slope_t", 0.0);
    c.amplitude = get("amplitude", 0.0);
    c.rate = get("rate", 1.0);
    return c;
}

}  // namespace

ModelSpec parse_model_config(std::istream& in) {
    static const std::set<std::string> known{"dimension",      "drift",          "covariance",
                                             "innovations",    "horizon",        "steps",
                                             "envelope_order", "ellipticity_lower", "ellipticity_upper"};
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!known.count(key)) throw ConfigError("unknown config key '" + key + "'");
        if (kv.count(key)) throw ConfigError("duplicate config key '" + key + "'");
        kv[key] = value;
    }

    ModelSpec spec;
    if (kv.count("dimension")) spec.dim = to_integer("dimension", kv["dimension"]);
    if (kv.count("drift")) spec.drift = build_coefficient("drift", parse_preset("drift", kv["drift"]));
    if (kv.count("covariance"))
        spec.covariance = build_coefficient("covariance", parse_preset("covariance", kv["covariance"]));
    PresetLine fam{"gaussian", {}};
    if (kv.count("innovations")) fam = parse_preset("innovations", kv["innovations"]);
    spec.innovations = make_family(fam.name, fam.params, spec.covariance);
    if (kv.count("horizon")) spec.horizon = to_number("horizon", kv["horizon"]);
    if (kv.count("steps")) spec.steps = to_integer("steps", kv["steps"]);
    if (kv.count("envelope_order"))
        spec.innovations.envelope_order = to_integer("envelope_order", kv["envelope_order"]);
    if (kv.count("ellipticity_lower")) spec.ellipticity.lower = to_number("ellipticity_lower", kv["ellipticity_lower"]);
    if (kv.count("ellipticity_upper")) spec.ellipticity.upper = to_number("ellipticity_upper", kv["ellipticity_upper"]);
    try {
        spec.check();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    return spec;
}

ModelSpec load_model_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_model_config(in);
}

std::string describe_model(const ModelSpec& spec) {
    std::ostringstream os;
    os.precision(17);
    os << "dimension = " << spec.dim << "\n";
    os << "drift = " << spec.drift.describe() << "\n";
    os << "covariance = " << spec.covariance.describe() << "\n";
    os << "innovations = " << spec.innovations.name;
    for (const auto& [k, v] : spec.innovations.parameters) os << " " << k << "=" << v;
    os << "\n";
    os << "horizon = " << spec.horizon << "\n";
    os << "steps = " << spec.steps << "\n";
    os << "envelope_order = " << spec.innovations.envelope_order << "\n";
    os << "ellipticity_lower = " << spec.ellipticity.lower << "\n";
    os << "ellipticity_upper = " << spec.ellipticity.upper << "\n";
    return os.str();
}

}  // namespace edgechain
