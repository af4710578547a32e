#include "ringsphere/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ringsphere {

namespace {

double pivmin_for(const SymTridiagonal& t) {
    double emax2 = 1.0;
    for (double e : t.off) emax2 = std::max(emax2, e * e);
    return std::numeric_limits<double>::min() * emax2;
}

int count_below(const SymTridiagonal& t, double sigma, double pivmin) {
    int count = 0;
    double d = 1.0;
    const std::size_t n = t.dim();
    for (std::size_t i = 0; i < n; ++i) {
        d = t.diag[i] - sigma - (i > 0 ? t.off[i - 1] * t.off[i - 1] / d : 0.0);
        if (std::abs(d) < pivmin) d = -pivmin;
        if (d < 0.0) ++count;
    }
    return count;
}

}  // namespace

int sturm_count(const SymTridiagonal& t, double sigma) {
    if (!t.valid()) throw std::invalid_argument("sturm_count: malformed matrix");
    return count_below(t, sigma, pivmin_for(t));
}

std::vector<double> lowest_eigenvalues(const SymTridiagonal& t, int k) {
    if (!t.valid()) throw std::invalid_argument("lowest_eigenvalues: malformed matrix");
    if (k < 1 || static_cast<std::size_t>(k) > t.dim())
        throw std::invalid_argument("lowest_eigenvalues: k outside [1, dim]");

    const double pivmin = pivmin_for(t);
    const std::size_t n = t.dim();

    double glo = t.diag[0], ghi = t.diag[0];
    for (std::size_t i = 0; i < n; ++i) {
        const double r = (i > 0 ? std::abs(t.off[i - 1]) : 0.0) +
                         (i + 1 < n ? std::abs(t.off[i]) : 0.0);
        glo = std::min(glo, t.diag[i] - r);
        ghi = std::max(ghi, t.diag[i] + r);
    }
    const double span = ghi - glo;
    glo -= 1e-12 * std::abs(glo) + 1e-12 * span + pivmin;
    ghi += 1e-12 * std::abs(ghi) + 1e-12 * span + pivmin;

    constexpr double eps = std::numeric_limits<double>::epsilon();
    std::vector<double> out;
    out.reserve(k);
    double lower = glo;
    for (int j = 0; j < k; ++j) {
        double lo = lower, hi = ghi;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;  // interval at ulp resolution
            if (count_below(t, mid, pivmin) >= j + 1)
                hi = mid;
            else
                lo = mid;
            if (hi - lo <= 2.0 * eps * std::max(std::abs(lo), std::abs(hi)) + pivmin)
                break;
        }
        out.push_back(0.5 * (lo + hi));
        lower = lo;  // the next eigenvalue cannot lie below this bracket
    }
    return out;
}

}  // namespace ringsphere
