#include "edgechain/parametrix/field.hpp"

#include "edgechain/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

namespace edgechain {

namespace {

constexpr double kAnchorTol = 1e-12;

double clenshaw(const std::vector<double>& a, double x) {
    double b1 = 0.0, b2 = 0.0;
    for (int k = static_cast<int>(a.size()) - 1; k >= 1; --k) {
        const double b0 = 2.0 * x * b1 - b2 + a[k];
        b2 = b1;
        b1 = b0;
    }
    return x * b1 - b2 + a[0];
}

std::vector<double> derivative_coefficients(const std::vector<double>& c) {
    const int n = static_cast<int>(c.size());
    std::vector<double> d(n, 0.0);
    if (n < 2) return d;
    d[n - 2] = 2.0 * (n - 1) * c[n - 1];
    for (int k = n - 2; k >= 1; --k) d[k - 1] = (k + 1 < n ? d[k + 1] : 0.0) + 2.0 * k * c[k];
    d[0] *= 0.5;
    return d;
}

}  // namespace

class FieldSection final : public Section {
  public:
    FieldSection(const ScaledField& f, double tau) : f_(f) {
        const FieldGeometry& g = f.geo_;
        const int nt = g.n_tau, nz = g.n_zeta;
        std::vector<double> ell(nt, 0.0);
        int exact = -1;
        double den = 0.0;
        for (int i = 0; i < nt; ++i) {
            const double d = tau - f.tau_[i];
            if (d == 0.0) {
                exact = i;
                break;
            }
            ell[i] = f.bary_[i] / d;
            den += ell[i];
        }
        if (exact >= 0) {
            std::fill(ell.begin(), ell.end(), 0.0);
            ell[exact] = 1.0;
        } else {
            for (double& e : ell) e /= den;
        }
        const double unscale = std::pow(tau, -g.alpha);
        std::vector<double> row(nz, 0.0);
        for (int i = 0; i < nt; ++i) {
            if (ell[i] == 0.0) continue;
            const double* r = &f.data_[static_cast<std::size_t>(i) * nz];
            for (int j = 0; j < nz; ++j) row[j] += ell[i] * r[j];
        }
        coeffs_.emplace_back(nz, 0.0);
        std::vector<double>& a = coeffs_[0];
        for (int k = 0; k < nz; ++k) {
            const double* m = &f.dct_[static_cast<std::size_t>(k) * nz];
            double acc = 0.0;
            for (int j = 0; j < nz; ++j) acc += m[j] * row[j];
            a[k] = acc * unscale;
        }
        center_ = f.center(tau);
        inv_width_ = 1.0 / (g.scale * tau * g.zeta_radius);
    }

    double value(double z) const override {
        const double xh = (z - center_) * inv_width_;
        if (xh < -1.0 || xh > 1.0) return 0.0;
        return clenshaw(coeffs_[0], xh);
    }

    double deriv(int k, double z) const override {
        if (k < 0) throw UnsupportedOrderError("negative derivative order");
        const double xh = (z - center_) * inv_width_;
        if (xh < -1.0 || xh > 1.0) return 0.0;
        while (static_cast<int>(coeffs_.size()) <= k) coeffs_.push_back(derivative_coefficients(coeffs_.back()));
        return clenshaw(coeffs_[k], xh) * std::pow(inv_width_, k);
    }

  private:
    const ScaledField& f_;
    mutable std::vector<std::vector<double>> coeffs_;
    double center_ = 0.0, inv_width_ = 0.0;
};

std::shared_ptr<const ScaledField> ScaledField::build(const FieldGeometry& geometry, const RowFunction& row,
                                                      const ModelSpec* model, Execution exec) {
    if (geometry.n_tau < 2 || geometry.n_zeta < 4) throw DomainError("field grid is too small");
    if (!(geometry.extent > 0) || !(geometry.scale > 0) || !(geometry.zeta_radius > 0)) {
        throw DomainError("field geometry needs positive extent, scale and radius");
    }
    std::shared_ptr<ScaledField> f(new ScaledField());
    f->geo_ = geometry;
    f->model_ = model;
    const int nt = geometry.n_tau, nz = geometry.n_zeta;
    const double tmax = std::sqrt(geometry.extent);
    f->tau_.resize(nt);
    f->bary_.resize(nt);
    for (int i = 0; i < nt; ++i) {
        const double th = (2 * i + 1) * std::numbers::pi / (2.0 * nt);
        f->tau_[i] = 0.5 * tmax * (1.0 + std::cos(th));
        f->bary_[i] = ((i % 2) ? -1.0 : 1.0) * std::sin(th);
    }
    f->zeta_hat_.resize(nz);
    f->dct_.resize(static_cast<std::size_t>(nz) * nz);
    std::vector<double> theta(nz);
    for (int j = 0; j < nz; ++j) {
        theta[j] = (2 * j + 1) * std::numbers::pi / (2.0 * nz);
        f->zeta_hat_[j] = std::cos(theta[j]);
    }
    for (int k = 0; k < nz; ++k) {
        const double w = (k == 0 ? 1.0 : 2.0) / nz;
        for (int j = 0; j < nz; ++j) f->dct_[static_cast<std::size_t>(k) * nz + j] = w * std::cos(k * theta[j]);
    }
    f->data_.assign(static_cast<std::size_t>(nt) * nz, 0.0);
    const ScaledField& cf = *f;
#pragma omp parallel for schedule(dynamic, 1) if (exec == Execution::parallel)
    for (int i = 0; i < nt; ++i) {
        std::vector<double> z(nz), out(nz, 0.0);
        for (int j = 0; j < nz; ++j) z[j] = cf.node_point(i, j);
        row(cf.node_time(i), z, out);
        const double scale = std::pow(cf.tau_[i], geometry.alpha);
        for (int j = 0; j < nz; ++j) f->data_[static_cast<std::size_t>(i) * nz + j] = scale * out[j];
    }
    return f;
}

double ScaledField::center(double tau) const {
    const double shift = geo_.drift * tau * tau;
    return geo_.anchor == FieldAnchor::terminal ? geo_.anchor_point - shift : geo_.anchor_point + shift;
}

double ScaledField::node_time(int i) const {
    const double e = tau_[i] * tau_[i];
    return geo_.anchor == FieldAnchor::terminal ? geo_.anchor_time - e : geo_.anchor_time + e;
}

double ScaledField::node_point(int i, int j) const {
    return center(tau_[i]) + geo_.scale * tau_[i] * geo_.zeta_radius * zeta_hat_[j];
}

SectionPtr ScaledField::section_at(double elapsed) const {
    if (!(elapsed > 0)) throw DomainError("field evaluated at zero elapsed time");
    if (elapsed > geo_.extent * (1.0 + 1e-12)) throw DomainError("field evaluated beyond its time extent");
    return std::make_unique<FieldSection>(*this, std::sqrt(std::min(elapsed, geo_.extent)));
}

SectionPtr ScaledField::right_section(double u, double t, double y) const {
    if (geo_.anchor != FieldAnchor::terminal) throw CapabilityError("initial-anchored field used as a right factor");
    if (std::abs(t - geo_.anchor_time) > kAnchorTol || std::abs(y - geo_.anchor_point) > kAnchorTol) {
        throw DomainError("field evaluated away from its anchor");
    }
    return section_at(t - u);
}

SectionPtr ScaledField::left_section(double s, double u, double x) const {
    if (geo_.anchor != FieldAnchor::initial) throw CapabilityError("terminal-anchored field used as a left factor");
    if (std::abs(s - geo_.anchor_time) > kAnchorTol || std::abs(x - geo_.anchor_point) > kAnchorTol) {
        throw DomainError("field evaluated away from its anchor");
    }
    return section_at(u - s);
}

double ScaledField::eval(double s, double t, double x, double y) const {
    if (geo_.anchor == FieldAnchor::terminal) return right_section(s, t, y)->value(x);
    return left_section(s, t, x)->value(y);
}

double ScaledField::deriv(int k, double s, double t, double x, double y) const {
    if (k == 0) return eval(s, t, x, y);
    if (geo_.anchor != FieldAnchor::terminal) throw CapabilityError("initial-anchored field has no x derivatives");
    return right_section(s, t, y)->deriv(k, x);
}

int ScaledField::max_deriv_order() const { return geo_.anchor == FieldAnchor::terminal ? 8 : 0; }

void ScaledField::dump_csv(std::ostream& os) const {
    os << "s,t,x,y,value\n";
    const int nz = geo_.n_zeta;
    for (int i = 0; i < geo_.n_tau; ++i) {
        const double u = node_time(i);
        const double unscale = std::pow(tau_[i], -geo_.alpha);
        for (int j = 0; j < nz; ++j) {
            const double z = node_point(i, j);
            const double v = data_[static_cast<std::size_t>(i) * nz + j] * unscale;
            if (geo_.anchor == FieldAnchor::terminal) {
                os << u << ',' << geo_.anchor_time << ',' << z << ',' << geo_.anchor_point << ',' << v << '\n';
            } else {
                os << geo_.anchor_time << ',' << u << ',' << geo_.anchor_point << ',' << z << ',' << v << '\n';
            }
        }
    }
}

}  // namespace edgechain
