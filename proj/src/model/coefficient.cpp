#include "edgechain/model/coefficient.hpp"

#include "edgechain/errors.hpp"

#include <cmath>
#include <sstream>

namespace edgechain {

Coefficient Coefficient::constant(double c) {
    Coefficient k;
    k.kind = Kind::constant;
    k.level = c;
    return k;
}

Coefficient Coefficient::affine_t(double level, double slope_t) {
    Coefficient k;
    k.kind = Kind::affine_t;
    k.level = level;
    k.slope_t = slope_t;
    return k;
}

Coefficient Coefficient::tanh_x(double level, double amplitude, double rate, double slope_t) {
    Coefficient k;
    k.kind = Kind::tanh_x;
    k.level = level;
    k.amplitude = amplitude;
    k.rate = rate;
    k.slope_t = slope_t;
    return k;
}

Coefficient Coefficient::sine_x(double level, double amplitude, double rate, double slope_t) {
    Coefficient k;
    k.kind = Kind::sine_x;
    k.level = level;
    k.amplitude = amplitude;
    k.rate = rate;
    k.slope_t = slope_t;
    return k;
}

Coefficient Coefficient::ou_linear(double rate, double level) {
    Coefficient k;
    k.kind = Kind::ou_linear;
    k.level = level;
    k.rate = rate;
    return k;
}

namespace {

// k-th derivative in x of the state part g(x).
double state_part(const Coefficient& c, int k, double x) {
    const double a = c.amplitude;
    const double r = c.rate;
    switch (c.kind) {
        case Coefficient::Kind::constant:
        case Coefficient::Kind::affine_t:
            return 0.0;
        case Coefficient::Kind::ou_linear:
            if (k == 0) return -r * x;
            return k == 1 ? -r : 0.0;
        case Coefficient::Kind::tanh_x: {
            const double th = std::tanh(r * x);
            const double s2 = 1.0 - th * th;
            switch (k) {
                case 0: return a * th;
                case 1: return a * r * s2;
                case 2: return -2.0 * a * r * r * th * s2;
                case 3: return -2.0 * a * r * r * r * s2 * (1.0 - 3.0 * th * th);
                case 4: return 8.0 * a * r * r * r * r * th * s2 * (2.0 - 3.0 * th * th);
                default: break;
            }
            break;
        }
        case Coefficient::Kind::sine_x: {
            const double sn = std::sin(r * x);
            const double cs = std::cos(r * x);
            const double rk = std::pow(r, k);
            switch (k % 4) {
                case 0: return a * rk * sn;
                case 1: return a * rk * cs;
                case 2: return -a * rk * sn;
                default: return -a * rk * cs;
            }
        }
    }
    throw UnsupportedOrderError("coefficient derivative order must be in [0, 4]");
}

}  // namespace

double Coefficient::value(double t, double x) const { return level + slope_t * t + state_part(*this, 0, x); }

double Coefficient::dx(int k, double t, double x) const {
    if (k < 0 || k > 4) throw UnsupportedOrderError("coefficient derivative order must be in [0, 4]");
    if (k == 0) return value(t, x);
    return state_part(*this, k, x);
}

double Coefficient::dt(double, double) const { return slope_t; }

double Coefficient::integral(double s, double t, double x) const {
    return (t - s) * (level + state_part(*this, 0, x)) + 0.5 * slope_t * (t * t - s * s);
}

bool Coefficient::state_independent() const {
    switch (kind) {
        case Kind::constant:
        case Kind::affine_t:
            return true;
        case Kind::ou_linear:
            return rate == 0.0;
        case Kind::tanh_x:
        case Kind::sine_x:
            return amplitude == 0.0 || rate == 0.0;
    }
    return false;
}

double Coefficient::abs_bound(double radius) const {
    double b = std::abs(level) + std::abs(slope_t);
    switch (kind) {
        case Kind::constant:
        case Kind::affine_t:
            break;
        case Kind::ou_linear:
            b += std::abs(rate) * radius;
            break;
        case Kind::tanh_x:
        case Kind::sine_x:
            b += std::abs(amplitude);
            break;
    }
    return b;
}

std::string Coefficient::describe() const {
    std::ostringstream os;
    os << coefficient_kind_name(kind) << " level=" << level << " slope_t=" << slope_t << " amplitude=" << amplitude
       << " rate=" << rate;
    return os.str();
}

Coefficient::Kind coefficient_kind_from_name(const std::string& name) {
    if (name == "constant") return Coefficient::Kind::constant;
    if (name == "affine_t") return Coefficient::Kind::affine_t;
    if (name == "tanh_x") return Coefficient::Kind::tanh_x;
    if (name == "sine_x") return Coefficient::Kind::sine_x;
    if (name == "ou_linear") return Coefficient::Kind::ou_linear;
    throw ConfigError("unknown coefficient preset '" + name + "'");
}

std::string coefficient_kind_name(Coefficient::Kind kind) {
    switch (kind) {
        case Coefficient::Kind::constant: return "constant";
        case Coefficient::Kind::affine_t: return "affine_t";
        case Coefficient::Kind::tanh_x: return "tanh_x";
        case Coefficient::Kind::sine_x: return "sine_x";
        case Coefficient::Kind::ou_linear: return "ou_linear";
    }
    return "unknown";
}

}  // namespace edgechain
