#include "ringsphere/wavefunction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ringsphere/quadrature.hpp"

namespace ringsphere {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

// The profile polynomial is F(-n, n+1+a+b; a+1; x) = P_n^{(a,b)}(1-2x) / binom(n+a, n)
// with a = 2 alpha, b = 2 gamma.  The three-term recurrence keeps the evaluation
// stable where the monomial form cancels catastrophically (alpha of order a^2 omega_m
// reaches the hundreds on wide rings).
double jacobi_poly(int n, double a, double b, double z) {
    if (n == 0) return 1.0;
    double prev = 1.0;
    double cur = 0.5 * (a - b) + (1.0 + 0.5 * (a + b)) * z;
    for (int k = 2; k <= n; ++k) {
        const double s = 2.0 * k + a + b;
        const double c1 = 2.0 * k * (k + a + b) * (s - 2.0);
        const double c2 = (s - 1.0) * (s * (s - 2.0) * z + (a - b) * (a + b));
        const double c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
        const double next = (c2 * cur - c3 * prev) / c1;
        prev = cur;
        cur = next;
    }
    return cur;
}

double log_jacobi_scale(int n, double a) {
    double s = 0.0;
    for (int k = 1; k <= n; ++k) s += std::log1p(a / k);
    return s;
}

}  // namespace

double hypergeom_poly(int n, double bp, double cp, double x) {
    if (n < 0) throw std::invalid_argument("hypergeom_poly: n must be >= 0");
    for (int k = 0; k < n; ++k) {
        if (cp + k == 0.0)
            throw std::invalid_argument(
                "hypergeom_poly: cp is a nonpositive integer inside the series");
    }
    double term = 1.0, sum = 1.0;
    for (int k = 0; k < n; ++k) {
        term *= (static_cast<double>(k) - n) * (bp + k) / ((cp + k) * (k + 1.0)) * x;
        sum += term;
    }
    return sum;
}

RadialProfile radial_profile(const ModelParams& params, const QuantumNumbers& qn) {
    if (!qn.valid()) throw std::invalid_argument("radial_profile: n must be >= 0");
    const auto d = derive_state_quantities(params, qn);
    if (!(d.omega_m > 0.0))
        throw degenerate_frequency_error("radial_profile: omega_m = 0");
    if (params.geometry.flat_limit)
        throw std::invalid_argument("radial_profile requires finite a");

    RadialProfile p;
    p.qn = qn;
    const double a = params.geometry.a;
    p.alpha = a * a * d.omega_m;
    p.gamma = 0.5 * d.M;

    const double bp = qn.n + 1.0 + 2.0 * p.alpha + 2.0 * p.gamma;
    const double cp = 1.0 + 2.0 * p.alpha;
    p.poly_coeffs.resize(static_cast<std::size_t>(qn.n) + 1);
    p.poly_coeffs[0] = 1.0;
    for (int k = 0; k < qn.n; ++k) {
        p.poly_coeffs[k + 1] = p.poly_coeffs[k] *
                               (static_cast<double>(k) - qn.n) * (bp + k) /
                               ((cp + k) * (k + 1.0));
    }
    p.norm = std::numeric_limits<double>::quiet_NaN();
    return p;
}

LogValue profile_log_eval(const RadialProfile& p, double x) {
    if (!(x >= 0.0 && x <= 1.0))
        throw std::invalid_argument("profile_log_eval: x outside [0, 1]");
    LogValue v;
    const double lead = p.poly_coeffs[0];
    const double jac = jacobi_poly(p.qn.n, 2.0 * p.alpha, 2.0 * p.gamma, 1.0 - 2.0 * x);
    if (jac == 0.0 || lead == 0.0 || x == 0.0 || (x == 1.0 && p.gamma > 0.0)) {
        v.log_abs = neg_inf;
        v.sign = 0;
        return v;
    }
    v.sign = (jac > 0.0) == (lead > 0.0) ? 1 : -1;
    v.log_abs = p.alpha * std::log(x) + std::log(std::abs(jac)) +
                std::log(std::abs(lead)) - log_jacobi_scale(p.qn.n, 2.0 * p.alpha);
    if (p.gamma > 0.0) v.log_abs += p.gamma * std::log1p(-x);
    return v;
}

namespace {

// Density-peak envelope of x^alpha (1-x)^gamma: maximum at
// x* = alpha/(alpha+gamma) with Gaussian width from the log-curvature.
// Segment boundaries around it keep the quadrature nodes from skipping a
// narrow peak when alpha is large.
std::vector<double> seed_points(const RadialProfile& p) {
    const double al = p.alpha, ga = p.gamma;
    double xstar = ga > 0.0 ? al / (al + ga) : 1.0;
    xstar = std::clamp(xstar, 1e-12, 1.0 - 1e-12);
    const double curv = 2.0 * al / (xstar * xstar) +
                        (ga > 0.0 ? 2.0 * ga / ((1.0 - xstar) * (1.0 - xstar)) : 0.0);
    double sigma = curv > 0.0 ? 1.0 / std::sqrt(curv) : 0.25;
    sigma *= 2.0 * std::sqrt(p.qn.n + 1.0);  // polynomial factor widens the support

    std::vector<double> pts{0.0, 1.0};
    for (double j : {1.0, 2.0, 3.0, 4.0, 6.0, 8.0, 12.0, 16.0, 24.0, 32.0}) {
        for (double s : {-1.0, 1.0}) {
            const double x = xstar + s * j * sigma;
            if (x > 0.0 && x < 1.0) pts.push_back(x);
        }
    }
    pts.push_back(xstar);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

struct ScaledIntegral {
    double log_scale = 0.0;  // integral = exp(log_scale) * mantissa
    double mantissa = 0.0;
};

// Integrates exp(g(x)) dx with g given in log space, factoring out the
// maximum of g over the seed scan so the integrand stays representable.
ScaledIntegral integrate_log(const std::function<double(double)>& g,
                             const std::vector<double>& pts) {
    double gmax = neg_inf;
    const int scan = 64;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        for (int j = 0; j <= scan; ++j) {
            const double x = pts[i] + (pts[i + 1] - pts[i]) * j / scan;
            gmax = std::max(gmax, g(x));
        }
    }
    if (gmax == neg_inf)
        return ScaledIntegral{0.0, 0.0};

    ScaledIntegral out;
    out.log_scale = gmax;
    auto f = [&](double x) {
        const double z = g(x) - gmax;
        return z < -745.0 ? 0.0 : std::exp(z);
    };
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        out.mantissa += integrate_adaptive(f, pts[i], pts[i + 1], 1e-13).value;
    return out;
}

}  // namespace

double normalize(RadialProfile& p, const Geometry& geometry) {
    if (!(p.alpha > -0.5) || !(p.gamma > -0.5))
        throw non_normalizable_error("normalize: profile exponents give a divergent integral");
    const double a = geometry.a;
    auto g = [&](double x) {
        const LogValue v = profile_log_eval(p, x);
        return v.sign == 0 ? neg_inf : 2.0 * v.log_abs;
    };
    const auto integral = integrate_log(g, seed_points(p));
    if (!(integral.mantissa > 0.0))
        throw non_normalizable_error("normalize: vanishing normalization integral");
    // 1 = 2 a^2 c^2 exp(log_scale) * mantissa
    p.log_norm = -0.5 * (std::log(2.0 * a * a) + integral.log_scale +
                         std::log(integral.mantissa));
    p.norm = std::exp(p.log_norm);
    p.normalized = true;
    return p.norm;
}

double profile_eval(const RadialProfile& p, double x) {
    const LogValue v = profile_log_eval(p, x);
    if (v.sign == 0) return 0.0;
    const double log_val = v.log_abs + (p.normalized ? p.log_norm : 0.0);
    if (log_val < -745.0) return 0.0;
    return v.sign * std::exp(log_val);
}

RadialProfile normalized_profile(const ModelParams& params,
                                 const QuantumNumbers& qn) {
    RadialProfile p = radial_profile(params, qn);
    normalize(p, params.geometry);
    return p;
}

double overlap(const ModelParams& params, const QuantumNumbers& qn1,
               const QuantumNumbers& qn2) {
    if (qn1.m != qn2.m)
        throw std::invalid_argument("overlap: states must share m (others are "
                                    "orthogonal through the angular factor)");
    const RadialProfile p1 = normalized_profile(params, qn1);
    const RadialProfile p2 = normalized_profile(params, qn2);
    const double a = params.geometry.a;
    auto f = [&](double x) { return profile_eval(p1, x) * profile_eval(p2, x); };

    const auto pts = seed_points(qn1.n >= qn2.n ? p1 : p2);
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        s += integrate_adaptive(f, pts[i], pts[i + 1], 1e-13, 1e-16).value;
    return 2.0 * a * a * s;
}

std::vector<std::pair<double, double>> density_samples(
    const ModelParams& params, const QuantumNumbers& qn, Coordinate coord,
    const std::vector<double>& grid) {
    const RadialProfile p = normalized_profile(params, qn);
    const auto& g = params.geometry;
    std::vector<std::pair<double, double>> out;
    out.reserve(grid.size());
    for (double c : grid) {
        double x, jac;
        switch (coord) {
            case Coordinate::x:
                if (!(c > 0.0 && c < 1.0))
                    throw std::invalid_argument("density_samples: x outside (0, 1)");
                x = c;
                jac = 2.0 * g.a * g.a;
                break;
            case Coordinate::rho: {
                if (!(c > 0.0))
                    throw std::invalid_argument("density_samples: rho must be > 0");
                x = x_from_rho(g, c);
                const double u = 1.0 + (c / (2.0 * g.a)) * (c / (2.0 * g.a));
                jac = c / (u * u);
                break;
            }
            case Coordinate::theta: {
                if (!(c > 0.0 && c < M_PI))
                    throw std::invalid_argument("density_samples: theta outside (0, pi)");
                x = x_from_theta(c);
                jac = g.a * g.a * std::sin(c);
                break;
            }
            default:
                throw std::invalid_argument("density_samples: unknown coordinate");
        }
        const double cf = profile_eval(p, x);
        out.emplace_back(c, jac * cf * cf);
    }
    return out;
}

int profile_nodes(const RadialProfile& p, int samples) {
    int nodes = 0;
    int last_sign = 0;
    for (int i = 1; i < samples; ++i) {
        const double x = static_cast<double>(i) / samples;
        const double v = p.poly_coeffs[0] *
                         jacobi_poly(p.qn.n, 2.0 * p.alpha, 2.0 * p.gamma, 1.0 - 2.0 * x);
        const int s = v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
        if (s == 0) continue;
        if (last_sign != 0 && s != last_sign) ++nodes;
        last_sign = s;
    }
    return nodes;
}

}  // namespace ringsphere
