#include "ringsphere/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ringsphere {

insufficient_states_error::insufficient_states_error(std::size_t needed_,
                                                     std::size_t available_)
    : std::runtime_error("insufficient states: need " + std::to_string(needed_) +
                         ", have " + std::to_string(available_)),
      needed(needed_),
      available(available_) {}

namespace {

double convention_factor(Convention c) {
    return c == Convention::half ? 0.5 : 1.0;
}

}  // namespace

double state_moment(const ModelParams& params, const QuantumNumbers& qn) {
    const auto d = derive_state_quantities(params, qn);
    if (!(d.omega_m > 0.0))
        throw degenerate_frequency_error("state_moment: omega_m = 0");
    const double mp = m_plus_nu(params, qn.m);
    double drift;
    if (params.geometry.flat_limit) {
        drift = d.omega_c / d.omega_m;
    } else {
        const double a = params.geometry.a;
        drift = (d.omega_c + mp / (2.0 * a * a)) / d.omega_m;
    }
    const double c2 = 2.0 * convention_factor(params.convention);
    return -((2.0 * qn.n + d.M + 1.0) * drift + c2 * mp);
}

double state_current(const ModelParams& params, const QuantumNumbers& qn) {
    const auto d = derive_state_quantities(params, qn);
    if (!(d.omega_m > 0.0))
        throw degenerate_frequency_error("state_current: omega_m = 0");
    if (!(d.M > 0.0))
        throw std::domain_error("state_current: rho_m undefined at M = 0");
    const double moment_nat = mu_b_star * state_moment(params, qn);
    double curv = 1.0;
    if (!params.geometry.flat_limit) {
        const double r = d.rho_m / (2.0 * params.geometry.a);
        curv = 1.0 + r * r;
    }
    const double loop = moment_nat * curv +
                        mu_b_star * (d.omega_c / d.omega_m) * (2.0 * qn.n + 1.0);
    return loop / (M_PI * d.rho_m * d.rho_m);
}

double moment_from_current(const ModelParams& params, const QuantumNumbers& qn,
                           double current) {
    const auto d = derive_state_quantities(params, qn);
    if (!(d.omega_m > 0.0))
        throw degenerate_frequency_error("moment_from_current: omega_m = 0");
    if (!(d.M > 0.0))
        throw std::domain_error("moment_from_current: rho_m undefined at M = 0");
    double curv = 1.0;
    if (!params.geometry.flat_limit) {
        const double r = d.rho_m / (2.0 * params.geometry.a);
        curv = 1.0 + r * r;
    }
    const double moment_nat =
        (M_PI * d.rho_m * d.rho_m * current -
         mu_b_star * (d.omega_c / d.omega_m) * (2.0 * qn.n + 1.0)) /
        curv;
    return moment_nat / mu_b_star;
}

namespace {

EnsembleResult accumulate(const std::vector<OccupiedState>& occ, double mu_ch) {
    EnsembleResult r;
    r.occupation = occ;
    r.chemical_potential = mu_ch;
    for (const auto& o : r.occupation) {
        r.total_moment += o.weight * o.state.moment;
        if (o.state.current) {
            r.total_current += o.weight * *o.state.current;
        } else if (o.weight > 0.0) {
            r.has_undefined_current = true;
        }
    }
    return r;
}

}  // namespace

EnsembleResult fill_T0(const ModelParams& params, const EnsembleSpec& spec,
                       const SpectrumTable& table) {
    (void)params;
    if (spec.electrons < 1) throw std::invalid_argument("electrons must be >= 1");
    const std::size_t n = static_cast<std::size_t>(spec.electrons);
    if (table.states.size() < n)
        throw insufficient_states_error(n, table.states.size());

    std::vector<OccupiedState> occ;
    occ.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        occ.push_back(OccupiedState{table.states[i], 1.0});

    auto result = accumulate(occ, std::numeric_limits<double>::quiet_NaN());
    // Flag a degenerate Fermi level: the next state ties the last occupied
    // one within 1e-12 relative.
    if (table.states.size() > n) {
        const double e_last = table.states[n - 1].energy;
        const double e_next = table.states[n].energy;
        const double scale = std::max({std::abs(e_last), std::abs(e_next), 1e-300});
        result.degenerate_fill = std::abs(e_next - e_last) <= 1e-12 * scale;
    }
    return result;
}

double chemical_potential(const EnsembleSpec& spec, const SpectrumTable& table) {
    if (!(spec.temperature > 0.0))
        throw std::invalid_argument("chemical_potential requires T > 0");
    if (spec.electrons < 1) throw std::invalid_argument("electrons must be >= 1");
    if (table.states.empty())
        throw insufficient_states_error(static_cast<std::size_t>(spec.electrons), 0);
    const double n_target = spec.electrons;
    const double t = spec.temperature;

    const auto occupancy_sum = [&](double mu) {
        double s = 0.0;
        for (const auto& st : table.states) {
            const double z = (st.energy - mu) / t;
            // Large |z| saturates; the explicit branches avoid overflow.
            if (z > 700.0)
                continue;
            else if (z < -700.0)
                s += 1.0;
            else
                s += 1.0 / (std::exp(z) + 1.0);
        }
        return s;
    };

    double e_min = table.states.front().energy;
    double e_max = table.states.front().energy;
    for (const auto& st : table.states) {
        e_min = std::min(e_min, st.energy);
        e_max = std::max(e_max, st.energy);
    }

    double lo = e_min - 80.0 * t - 1.0;
    double hi = e_max + 80.0 * t + 1.0;
    if (occupancy_sum(hi) < n_target - 1e-10)
        throw insufficient_states_error(static_cast<std::size_t>(spec.electrons),
                                        table.states.size());

    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double s = occupancy_sum(mid);
        if (std::abs(s - n_target) < 1e-12) { lo = hi = mid; break; }
        (s < n_target ? lo : hi) = mid;
        if (hi - lo < 1e-15 * std::max(1.0, std::abs(mid))) break;
    }
    const double mu = 0.5 * (lo + hi);
    if (std::abs(occupancy_sum(mu) - n_target) > 1e-10)
        throw std::runtime_error("chemical_potential: bisection failed to meet residual");

    // The enumeration window must be wide enough that the highest retained
    // state is essentially unoccupied; otherwise the sum is untrustworthy.
    const double tail = 1.0 / (std::exp(std::min((e_max - mu) / t, 700.0)) + 1.0);
    if (tail >= 1e-12)
        throw std::runtime_error(
            "chemical_potential: enumeration window too small (tail occupation " +
            std::to_string(tail) + "); widen the m window or raise max_states");
    return mu;
}

EnsembleResult total_magnetization(const ModelParams& params,
                                   const EnsembleSpec& spec,
                                   const SpectrumTable& table) {
    if (spec.temperature == 0.0) return fill_T0(params, spec, table);

    const double mu = chemical_potential(spec, table);
    std::vector<OccupiedState> occ;
    occ.reserve(table.states.size());
    for (const auto& st : table.states) {
        const double z = (st.energy - mu) / spec.temperature;
        double w;
        if (z > 700.0)
            w = 0.0;
        else if (z < -700.0)
            w = 1.0;
        else
            w = 1.0 / (std::exp(z) + 1.0);
        occ.push_back(OccupiedState{st, w});
    }
    return accumulate(occ, mu);
}

EnsembleResult total_magnetization(const ModelParams& params,
                                   const EnsembleSpec& spec,
                                   const EnumerationOptions& opts) {
    return total_magnetization(params, spec, enumerate_states(params, opts));
}

}  // namespace ringsphere
