#include "edgechain/model/innovation.hpp"

#include "edgechain/errors.hpp"

#include <cmath>
#include <numbers>
#include <set>

namespace edgechain {

double InnovationFamily::cumulant(const MultiIndex& nu, double t, double x) const {
    if (nu.dim() != 1) throw CapabilityError("innovation cumulants are implemented for d = 1");
    return cumulant(nu.order(), t, x);
}

double InnovationFamily::cumulant(int order, double t, double x) const {
    if (order < 1 || order > 4) throw UnsupportedOrderError("cumulant order must be in [1, 4]");
    return cumulant_fn(order, t, x);
}

std::vector<double> InnovationFamily::breakpoints_at(double t, double x) const {
    if (!breakpoints) return {};
    return breakpoints(t, x);
}

namespace {

constexpr double inv_sqrt_2pi = 0.3989422804014327;

double scale_of(const Coefficient& cov, double t, double x) {
    const double s = cov.value(t, x);
    if (!(s > 0.0) || !std::isfinite(s)) throw ModelEvaluationError("covariance must be positive and finite");
    return std::sqrt(s);
}

// Standardized two-point mixture quantities for weight w.
struct MixtureShape {
    double w, mu1, mu2, var;
    MixtureShape(double separation, double weight) : w(weight) {
        const double q = 1.0 - w;
        mu1 = q * separation;
        mu2 = -w * separation;
        var = 1.0 - w * q * separation * separation;
    }
    double density(double z) const {
        const double a = (z - mu1), b = (z - mu2);
        return (w * std::exp(-a * a / (2 * var)) + (1 - w) * std::exp(-b * b / (2 * var))) * inv_sqrt_2pi /
               std::sqrt(var);
    }
    std::complex<double> cf(double th) const {
        const std::complex<double> i(0.0, 1.0);
        return (w * std::exp(i * (mu1 * th)) + (1 - w) * std::exp(i * (mu2 * th))) * std::exp(-0.5 * var * th * th);
    }
    double kappa(int n, double separation) const {
        const double q = 1.0 - w;
        switch (n) {
            case 1: return 0.0;
            case 2: return 1.0;
            case 3: return w * q * (1 - 2 * w) * std::pow(separation, 3);
            default: return w * q * (1 - 6 * w * q) * std::pow(separation, 4);
        }
    }
    double sample(Rng& rng) const {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        std::normal_distribution<double> n(0.0, 1.0);
        const double m = u(rng) < w ? mu1 : mu2;
        return m + std::sqrt(var) * n(rng);
    }
};

void check_mixture(double separation, double weight) {
    if (!(weight > 0.0 && weight < 1.0)) throw ConfigError("mixture weight must lie in (0, 1)");
    if (!(weight * (1 - weight) * separation * separation < 1.0))
        throw ConfigError("mixture separation too large: component variance would be non-positive");
}

}  // namespace

InnovationFamily gaussian_family(const Coefficient& cov) {
    InnovationFamily f;
    f.name = "gaussian";
    f.density = [cov](double t, double x, double z) {
        const double s = scale_of(cov, t, x);
        const double a = z / s;
        return inv_sqrt_2pi * std::exp(-0.5 * a * a) / s;
    };
    f.char_fn = [cov](double t, double x, double th) {
        return std::complex<double>(std::exp(-0.5 * cov.value(t, x) * th * th), 0.0);
    };
    f.sampler = [cov](double t, double x, Rng& rng) {
        std::normal_distribution<double> n(0.0, 1.0);
        return scale_of(cov, t, x) * n(rng);
    };
    f.cumulant_fn = [cov](int n, double t, double x) { return n == 2 ? cov.value(t, x) : 0.0; };
    f.state_independent = cov.state_independent();
    f.gaussian = true;
    return f;
}

InnovationFamily centered_exponential_family(const Coefficient& cov) {
    InnovationFamily f;
    f.name = "centered_exponential";
    f.density = [cov](double t, double x, double z) {
        const double s = scale_of(cov, t, x);
        const double a = z / s;
        return a < -1.0 ? 0.0 : std::exp(-(a + 1.0)) / s;
    };
    f.char_fn = [cov](double t, double x, double th) {
        const double u = scale_of(cov, t, x) * th;
        const std::complex<double> i(0.0, 1.0);
        return std::exp(-i * u) / (1.0 - i * u);
    };
    f.sampler = [cov](double t, double x, Rng& rng) {
        std::exponential_distribution<double> e(1.0);
        return scale_of(cov, t, x) * (e(rng) - 1.0);
    };
    f.cumulant_fn = [cov](int n, double t, double x) {
        static constexpr double kappa[5] = {0.0, 0.0, 1.0, 2.0, 6.0};
        return kappa[n] * std::pow(cov.value(t, x), 0.5 * n);
    };
    f.breakpoints = [cov](double t, double x) { return std::vector<double>{-scale_of(cov, t, x)}; };
    f.state_independent = cov.state_independent();
    f.tail_reach = 2.5;
    f.parameters = {};
    return f;
}

InnovationFamily two_point_mixture_family(const Coefficient& cov, double separation, double weight) {
    check_mixture(separation, weight);
    const MixtureShape shape(separation, weight);
    InnovationFamily f;
    f.name = "two_point_mixture";
    f.parameters = {{"separation", separation}, {"weight", weight}};
    f.density = [cov, shape](double t, double x, double z) {
        const double s = scale_of(cov, t, x);
        return shape.density(z / s) / s;
    };
    f.char_fn = [cov, shape](double t, double x, double th) { return shape.cf(scale_of(cov, t, x) * th); };
    f.sampler = [cov, shape](double t, double x, Rng& rng) { return scale_of(cov, t, x) * shape.sample(rng); };
    f.cumulant_fn = [cov, shape, separation](int n, double t, double x) {
        return shape.kappa(n, separation) * std::pow(cov.value(t, x), 0.5 * n);
    };
    f.state_independent = cov.state_independent();
    return f;
}

InnovationFamily student5_family(const Coefficient& cov) {
    InnovationFamily f;
    f.name = "student5";
    f.density = [cov](double t, double x, double z) {
        const double s = scale_of(cov, t, x);
        const double a = z / s;
        const double b = 1.0 + a * a / 3.0;
        return 8.0 / (3.0 * std::numbers::pi * std::sqrt(3.0)) / (b * b * b) / s;
    };
    f.char_fn = [cov](double t, double x, double th) {
        const double u = std::abs(scale_of(cov, t, x) * th);
        const double r3 = std::sqrt(3.0);
        return std::complex<double>((1.0 + r3 * u + u * u) * std::exp(-r3 * u), 0.0);
    };
    f.sampler = [cov](double t, double x, Rng& rng) {
        std::student_t_distribution<double> st(5.0);
        return scale_of(cov, t, x) * std::sqrt(0.6) * st(rng);
    };
    f.cumulant_fn = [cov](int n, double t, double x) {
        static constexpr double kappa[5] = {0.0, 0.0, 1.0, 0.0, 6.0};
        return kappa[n] * std::pow(cov.value(t, x), 0.5 * n);
    };
    f.envelope_order = 1;
    f.tail_reach = 3.0;
    f.state_independent = cov.state_independent();
    return f;
}

InnovationFamily modulated_mixture_family(const Coefficient& cov, double separation, double base, double swing,
                                          double rate) {
    const double lo = base - std::abs(swing), hi = base + std::abs(swing);
    check_mixture(separation, lo);
    check_mixture(separation, hi);
    check_mixture(separation, 0.5 * (lo + hi));
    auto weight = [base, swing, rate](double x) { return base + swing * std::tanh(rate * x); };
    InnovationFamily f;
    f.name = "modulated_mixture";
    f.parameters = {{"separation", separation}, {"base", base}, {"swing", swing}, {"rate", rate}};
    f.density = [cov, weight, separation](double t, double x, double z) {
        const double s = scale_of(cov, t, x);
        return MixtureShape(separation, weight(x)).density(z / s) / s;
    };
    f.char_fn = [cov, weight, separation](double t, double x, double th) {
        return MixtureShape(separation, weight(x)).cf(scale_of(cov, t, x) * th);
    };
    f.sampler = [cov, weight, separation](double t, double x, Rng& rng) {
        return scale_of(cov, t, x) * MixtureShape(separation, weight(x)).sample(rng);
    };
    f.cumulant_fn = [cov, weight, separation](int n, double t, double x) {
        return MixtureShape(separation, weight(x)).kappa(n, separation) * std::pow(cov.value(t, x), 0.5 * n);
    };
    f.state_independent = cov.state_independent() && (swing == 0.0 || rate == 0.0);
    return f;
}

InnovationFamily make_family(const std::string& name, const std::map<std::string, double>& params,
                             const Coefficient& cov) {
    auto allow = [&](std::set<std::string> keys) {
        for (const auto& [k, v] : params) {
            if (!keys.count(k)) throw ConfigError("unknown parameter '" + k + "' for innovation family " + name);
        }
    };
    auto get = [&](const std::string& k, double def) {
        auto it = params.find(k);
        return it == params.end() ? def : it->second;
    };
    if (name == "gaussian") {
        allow({});
        return gaussian_family(cov);
    }
    if (name == "centered_exponential") {
        allow({});
        return centered_exponential_family(cov);
    }
    if (name == "student5") {
        allow({});
        return student5_family(cov);
    }
    if (name == "two_point_mixture") {
        allow({"separation", "weight"});
        return two_point_mixture_family(cov, get("separation", 1.2), get("weight", 0.3));
    }
    if (name == "modulated_mixture") {
        allow({"separation", "base", "swing", "rate"});
        return modulated_mixture_family(cov, get("separation", 1.2), get("base", 0.3), get("swing", 0.15),
                                        get("rate", 1.0));
    }
    throw ConfigError("unknown innovation family '" + name + "'");
}

}  // namespace edgechain
