#include "edgechain/edgeworth/corrections.hpp"

#include "edgechain/errors.hpp"
#include "edgechain/kernels/operators.hpp"

#include <cmath>
#include <numbers>

namespace edgechain {

namespace {

class CumulantOperator final : public DifferentialOperator {
  public:
    CumulantOperator(ModelPtr spec, int order, bool at_terminal)
        : spec_(std::move(spec)), order_(order), terminal_(at_terminal) {}
    int order() const override { return order_; }
    void coefficients(double u, double z, double y, double* c) const override {
        for (int j = 0; j < order_; ++j) c[j] = 0.0;
        c[order_] = spec_->innovations.cumulant(order_, u, terminal_ ? y : z) / (order_ == 3 ? 6.0 : 24.0);
    }
    bool vanishes() const override { return spec_->innovations.gaussian; }

  private:
    ModelPtr spec_;
    int order_;
    bool terminal_;
};

class SquareDiffOperator final : public DifferentialOperator {
  public:
    explicit SquareDiffOperator(ModelPtr spec) : spec_(std::move(spec)) {}
    int order() const override { return 3; }
    void coefficients(double u, double z, double, double* c) const override { square_diff_coefficients(*spec_, u, z, c); }
    bool vanishes() const override { return spec_->coefficients_state_independent(); }

  private:
    ModelPtr spec_;
};

class TimeDiffOperator final : public DifferentialOperator {
  public:
    explicit TimeDiffOperator(ModelPtr spec) : spec_(std::move(spec)) {}
    int order() const override { return 2; }
    void coefficients(double u, double z, double y, double* c) const override {
        c[0] = 0.0;
        c[1] = spec_->drift.dt(u, z) - spec_->drift.dt(u, y);
        c[2] = 0.5 * (spec_->covariance.dt(u, z) - spec_->covariance.dt(u, y));
    }
    bool vanishes() const override {
        return spec_->coefficients_state_independent() ||
               (spec_->covariance.slope_t == 0.0 && spec_->drift.slope_t == 0.0);
    }

  private:
    ModelPtr spec_;
};

class DifferentialSection final : public Section {
  public:
    DifferentialSection(const DifferentialOperator& op, SectionPtr inner, double u, double y)
        : op_(op), inner_(std::move(inner)), u_(u), y_(y), c_(op.order() + 1) {}
    double value(double z) const override {
        op_.coefficients(u_, z, y_, c_.data());
        double acc = 0.0;
        for (int j = 0; j <= op_.order(); ++j) {
            if (c_[j] != 0.0) acc += c_[j] * inner_->deriv(j, z);
        }
        return acc;
    }

  private:
    const DifferentialOperator& op_;
    SectionPtr inner_;
    double u_, y_;
    mutable std::vector<double> c_;
};

class DifferentialKernel final : public SpaceTimeKernel {
  public:
    DifferentialKernel(OperatorPtr op, ModelPtr spec, KernelPtr f) : op_(std::move(op)), spec_(std::move(spec)), f_(std::move(f)) {
        if (spec_->dim != 1) throw CapabilityError("differential operators are implemented for d = 1");
        if (f_->max_deriv_order() < op_->order()) throw CapabilityError("operator needs higher kernel derivatives");
    }
    double eval(double s, double t, double x, double y) const override {
        if (identically_zero()) return 0.0;
        std::vector<double> c(op_->order() + 1);
        op_->coefficients(s, x, y, c.data());
        double acc = 0.0;
        for (int j = 0; j <= op_->order(); ++j) {
            if (c[j] != 0.0) acc += c[j] * f_->deriv(j, s, t, x, y);
        }
        return acc;
    }
    int max_deriv_order() const override { return 0; }
    SectionPtr right_section(double u, double t, double y) const override {
        return std::make_unique<DifferentialSection>(*op_, f_->right_section(u, t, y), u, y);
    }
    Localization localization() const override { return f_->localization(); }
    bool identically_zero() const override { return op_->vanishes() || f_->identically_zero(); }
    const ModelSpec* model() const override { return spec_.get(); }

  private:
    OperatorPtr op_;
    ModelPtr spec_;
    KernelPtr f_;
};

// Chebyshev interpolation on the Lobatto points of [-1, 1], mapped onto a window per use.
struct ChebyshevBasis {
    int m = 0;
    std::vector<double> unit_nodes;
    std::vector<double> cos_table;

    explicit ChebyshevBasis(int degree) : m(degree), unit_nodes(degree + 1), cos_table((degree + 1) * (degree + 1)) {
        for (int i = 0; i <= m; ++i) {
            unit_nodes[i] = std::cos(std::numbers::pi * i / m);
            for (int k = 0; k <= m; ++k) cos_table[k * (m + 1) + i] = std::cos(std::numbers::pi * ((k * i) % (2 * m)) / m);
        }
    }
    void nodes(double lo, double hi, std::vector<double>& z) const {
        z.resize(m + 1);
        for (int i = 0; i <= m; ++i) z[i] = 0.5 * (lo + hi) + 0.5 * (hi - lo) * unit_nodes[i];
    }
    void coefficients(const std::vector<double>& f, std::vector<double>& c) const {
        c.assign(m + 1, 0.0);
        for (int k = 0; k <= m; ++k) {
            const double* row = &cos_table[k * (m + 1)];
            double acc = 0.5 * (f[0] * row[0] + f[m] * row[m]);
            for (int i = 1; i < m; ++i) acc += f[i] * row[i];
            c[k] = 2.0 * acc / m;
        }
        c[0] *= 0.5;
        c[m] *= 0.5;
    }
    void differentiate(std::vector<double>& c, double lo, double hi) const {
        std::vector<double> d(m + 1, 0.0);
        for (int k = m - 1; k >= 0; --k) d[k] = (k + 2 <= m ? d[k + 2] : 0.0) + 2.0 * (k + 1) * c[k + 1];
        d[0] *= 0.5;
        const double scale = 2.0 / (hi - lo);
        for (int k = 0; k <= m; ++k) c[k] = d[k] * scale;
    }
    double evaluate(const std::vector<double>& c, double lo, double hi, double z) const {
        const double x = (2.0 * z - lo - hi) / (hi - lo);
        double b1 = 0.0, b2 = 0.0;
        for (int k = m; k >= 1; --k) {
            const double b0 = 2.0 * x * b1 - b2 + c[k];
            b2 = b1;
            b1 = b0;
        }
        return x * b1 - b2 + c[0];
    }
};

}  // namespace

OperatorPtr f1_operator(ModelPtr spec) { return std::make_shared<CumulantOperator>(std::move(spec), 3, false); }

OperatorPtr f2_operator(ModelPtr spec, F2Point point) {
    return std::make_shared<CumulantOperator>(std::move(spec), 4, point == F2Point::printed);
}

OperatorPtr square_diff_operator(ModelPtr spec) { return std::make_shared<SquareDiffOperator>(std::move(spec)); }

OperatorPtr time_diff_operator(ModelPtr spec) { return std::make_shared<TimeDiffOperator>(std::move(spec)); }

KernelPtr apply_differential(OperatorPtr op, ModelPtr spec, KernelPtr f) {
    return std::make_shared<DifferentialKernel>(std::move(op), std::move(spec), std::move(f));
}

KernelPtr apply_F1(ModelPtr spec, KernelPtr f) {
    OperatorPtr op = f1_operator(spec);
    return apply_differential(std::move(op), std::move(spec), std::move(f));
}

KernelPtr apply_F2(ModelPtr spec, KernelPtr f, F2Point point) {
    OperatorPtr op = f2_operator(spec, point);
    return apply_differential(std::move(op), std::move(spec), std::move(f));
}

void split_convolve_batch(const SpaceTimeKernel& left, const DifferentialOperator& op, const SpaceTimeKernel& base,
                          double s, double t, const std::vector<double>& xs, double y, const QuadratureSpec& q,
                          std::vector<double>& out) {
    if (!(t > s)) throw DomainError("convolution needs s < t");
    out.assign(xs.size(), 0.0);
    if (op.vanishes() || left.identically_zero() || base.identically_zero()) return;
    if (base.max_deriv_order() < op.order()) throw CapabilityError("operator needs higher kernel derivatives");
    const TimeNodes tn = time_nodes(s, t, q);
    const double mid = 0.5 * (s + t);
    const int order = op.order();
    const int degree = q.space_nodes;
    const ChebyshevBasis basis(degree);
    std::vector<double> z, a, b, coef(order + 1), cz, lv(degree + 1), c, total;
    for (std::size_t i = 0; i < tn.u.size(); ++i) {
        const double u = tn.u[i];
        const SectionPtr bs = base.right_section(u, t, y);
        for (std::size_t p = 0; p < xs.size(); ++p) {
            const SpaceWindow w = convolution_window(left, base, s, u, t, xs[p], y, q);
            const SectionPtr ls = left.left_section(s, u, xs[p]);
            const int n = w.intervals + 1;
            const double dz = w.step();
            z.resize(n);
            a.resize(n);
            b.resize(n);
            for (int k = 0; k < n; ++k) z[k] = w.lo + k * dz;
            if (u < mid) {
                DifferentialSection rs(op, base.right_section(u, t, y), u, y);
                ls->values(z.data(), a.data(), n);
                rs.values(z.data(), b.data(), n);
            } else {
                basis.nodes(w.lo, w.hi, cz);
                ls->values(cz.data(), lv.data(), degree + 1);
                total.assign(degree + 1, 0.0);
                std::vector<std::vector<double>> cj(order + 1, std::vector<double>(degree + 1));
                for (int k = 0; k <= degree; ++k) {
                    op.coefficients(u, cz[k], y, coef.data());
                    for (int j = 0; j <= order; ++j) cj[j][k] = coef[j] * lv[k];
                }
                for (int j = 0; j <= order; ++j) {
                    bool any = false;
                    for (double v : cj[j]) any = any || v != 0.0;
                    if (!any) continue;
                    basis.coefficients(cj[j], c);
                    for (int r = 0; r < j; ++r) basis.differentiate(c, w.lo, w.hi);
                    const double sign = j % 2 == 0 ? 1.0 : -1.0;
                    for (int k = 0; k <= degree; ++k) total[k] += sign * c[k];
                }
                for (int k = 0; k < n; ++k) a[k] = basis.evaluate(total, w.lo, w.hi, z[k]);
                bs->values(z.data(), b.data(), n);
            }
            double acc = 0.5 * (a[0] * b[0] + a[n - 1] * b[n - 1]);
            for (int k = 1; k < n - 1; ++k) acc += a[k] * b[k];
            out[p] += tn.w[i] * acc * dz;
        }
    }
}

}  // namespace edgechain
