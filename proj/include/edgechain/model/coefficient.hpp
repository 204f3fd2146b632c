#pragma once

#include <string>

namespace edgechain {

/// Scalar coefficient c(t, x) chosen from a fixed set of parametric presets.
///
/// Every preset has the form c(t, x) = level + slope_t·t + g(x):
///   constant   g = 0, slope_t = 0
///   affine_t   g = 0
///   tanh_x     g = amplitude·tanh(rate·x)
///   sine_x     g = amplitude·sin(rate·x)
///   ou_linear  g = −rate·x
/// Derivatives and time integrals are analytic.
struct Coefficient {
    enum class Kind { constant, affine_t, tanh_x, sine_x, ou_linear };

    Kind kind = Kind::constant;
    double level = 0.0;
    double slope_t = 0.0;
    double amplitude = 0.0;
    double rate = 1.0;

    static Coefficient constant(double c);
    static Coefficient affine_t(double level, double slope_t);
    static Coefficient tanh_x(double level, double amplitude, double rate, double slope_t = 0.0);
    static Coefficient sine_x(double level, double amplitude, double rate, double slope_t = 0.0);
    static Coefficient ou_linear(double rate, double level = 0.0);

    double value(double t, double x) const;
    /// k-th derivative in x, 0 <= k <= 4.
    double dx(int k, double t, double x) const;
    /// First derivative in t.
    double dt(double t, double x) const;
    /// ∫_s^t c(u, x) du.
    double integral(double s, double t, double x) const;

    /// True when c does not depend on x.
    bool state_independent() const;
    /// True when c does not depend on t.
    bool time_independent() const { return slope_t == 0.0; }
    /// Upper bound of |c| over t in [0, 1] and x in the ball |x| <= radius.
    double abs_bound(double radius) const;

    std::string describe() const;
};

Coefficient::Kind coefficient_kind_from_name(const std::string& name);
std::string coefficient_kind_name(Coefficient::Kind kind);

}  // namespace edgechain
