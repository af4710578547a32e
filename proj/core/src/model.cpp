#include "ringsphere/model.hpp"

#include <cmath>
#include <stdexcept>

namespace ringsphere {

ConfinementScales derive_confinement(const Confinement& c, const Geometry& g) {
    if (!c.valid()) throw std::invalid_argument("confinement: lambda1, lambda2 must be >= 0");
    if (!g.valid()) throw std::invalid_argument("geometry: a must be > 0");

    ConfinementScales out;
    if (c.lambda1 == 0.0 && c.lambda2 == 0.0) return out;

    if (g.flat_limit) {
        if (c.lambda1 == 0.0)
            throw std::domain_error(
                "flat antidot (lambda1 = 0, lambda2 > 0) has no finite potential minimum");
        out.omega0 = std::sqrt(8.0 * c.lambda1);
        out.rho0 = c.lambda2 > 0.0 ? std::pow(c.lambda2 / c.lambda1, 0.25) : 0.0;
        out.v0 = 2.0 * std::sqrt(c.lambda1 * c.lambda2);
        return out;
    }

    // Spherical forms: the lambda2 term picks up curvature corrections
    // through lambda_eff = lambda1 + lambda2/(2a)^4.
    const double a = g.a;
    const double lambda_eff = c.lambda1 + c.lambda2 / std::pow(2.0 * a, 4);
    out.omega0 = std::sqrt(8.0 * lambda_eff);
    out.rho0 = c.lambda2 > 0.0 ? std::pow(c.lambda2 / lambda_eff, 0.25) : 0.0;
    out.v0 = c.lambda2 / (2.0 * a * a) + 2.0 * std::sqrt(c.lambda2 * lambda_eff);
    return out;
}

std::vector<double> sample_potential(const ModelParams& params,
                                     const std::vector<double>& rho_grid) {
    const auto& c = params.confinement;
    const auto scales = derive_confinement(c, params.geometry);
    std::vector<double> out;
    out.reserve(rho_grid.size());
    for (double rho : rho_grid) {
        if (!(rho > 0.0)) throw std::invalid_argument("sample_potential: rho must be > 0");
        double curv = 1.0;
        if (!params.geometry.flat_limit) {
            const double r = rho / (2.0 * params.geometry.a);
            curv = (1.0 + r * r) * (1.0 + r * r);
        }
        double v = c.lambda1 * rho * rho - scales.v0;
        if (c.lambda2 > 0.0) v += c.lambda2 / (rho * rho) * curv;
        out.push_back(v);
    }
    return out;
}

double rho_from_theta(const Geometry& g, double theta) {
    if (!(theta > 0.0 && theta < M_PI))
        throw std::invalid_argument("rho_from_theta: theta outside (0, pi)");
    return 2.0 * g.a * std::tan(0.5 * theta);
}

double theta_from_rho(const Geometry& g, double rho) {
    if (!(rho > 0.0)) throw std::invalid_argument("theta_from_rho: rho must be > 0");
    return 2.0 * std::atan(rho / (2.0 * g.a));
}

double x_from_rho(const Geometry& g, double rho) {
    if (!(rho >= 0.0)) throw std::invalid_argument("x_from_rho: rho must be >= 0");
    const double r = rho / (2.0 * g.a);
    return 1.0 / (1.0 + r * r);
}

double rho_from_x(const Geometry& g, double x) {
    if (!(x > 0.0 && x <= 1.0)) throw std::invalid_argument("rho_from_x: x outside (0, 1]");
    return 2.0 * g.a * std::sqrt((1.0 - x) / x);
}

double x_from_theta(double theta) {
    if (!(theta >= 0.0 && theta < M_PI))
        throw std::invalid_argument("x_from_theta: theta outside [0, pi)");
    const double c = std::cos(0.5 * theta);
    return c * c;
}

DerivedQuantities derive_state_quantities(const ModelParams& params,
                                          const QuantumNumbers& qn) {
    if (!params.valid()) throw std::invalid_argument("invalid model parameters");
    if (!qn.valid()) throw std::invalid_argument("quantum numbers: n must be >= 0");

    const auto scales = derive_confinement(params.confinement, params.geometry);
    DerivedQuantities d;
    d.omega0 = scales.omega0;
    d.rho0 = scales.rho0;
    d.v0 = scales.v0;
    d.omega_c = params.fields.b;  // e = mu = c = 1

    const double mp = m_plus_nu(params, qn.m);
    // mu*omega0*rho0^2/(2*hbar) = sqrt(2*mu*lambda2)/hbar: independent of a.
    const double ang = std::sqrt(2.0 * params.confinement.lambda2);
    d.M = std::hypot(mp, ang);

    if (params.geometry.flat_limit) {
        d.omega_m = std::hypot(d.omega_c, d.omega0);
    } else {
        const double a = params.geometry.a;
        d.omega_m = std::hypot(d.omega_c + mp / (2.0 * a * a), d.omega0);
    }
    d.rho_m = d.omega_m > 0.0 ? std::sqrt(2.0 * d.M / d.omega_m) : 0.0;
    return d;
}

double require_rho_m(const ModelParams& params, const QuantumNumbers& qn) {
    const auto d = derive_state_quantities(params, qn);
    if (!(d.omega_m > 0.0))
        throw degenerate_frequency_error("rho_m undefined: omega_m = 0 for this state");
    return d.rho_m;
}

}  // namespace ringsphere
