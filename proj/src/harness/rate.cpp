#include "edgechain/harness/rate.hpp"

#include "edgechain/errors.hpp"

#include <gsl/gsl_fit.h>

#include <cmath>

namespace edgechain {

RateFit fit_rate(const std::vector<std::pair<double, double>>& rows) {
    if (rows.size() < 3) throw DomainError("fit_rate needs at least 3 rows");
    std::vector<double> lx, ly;
    for (const auto& [h, e] : rows) {
        if (!(h > 0.0) || !(e > 0.0)) throw DomainError("fit_rate needs positive h and error");
        lx.push_back(std::log(h));
        ly.push_back(std::log(e));
    }
    double c0 = 0, c1 = 0, cov00 = 0, cov01 = 0, cov11 = 0, sumsq = 0;
    gsl_fit_linear(lx.data(), 1, ly.data(), 1, lx.size(), &c0, &c1, &cov00, &cov01, &cov11, &sumsq);
    return {c1, std::sqrt(cov11), c0};
}

}  // namespace edgechain
