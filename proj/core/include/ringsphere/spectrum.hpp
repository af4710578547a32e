#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ringsphere/model.hpp"

namespace ringsphere {

enum class BoundPolicy { paper, relaxed };

struct StateRecord {
    QuantumNumbers qn;
    double energy = 0.0;
    double moment = 0.0;                 // in mu_B*
    std::optional<double> current;       // closed form; empty when M = 0
    double rho_m = 0.0;
    double M = 0.0;
    double omega_m = 0.0;
    std::string flags;                   // semicolon-joined, e.g. "M0"
};

struct SpectrumTable {
    ModelParams params;
    std::vector<StateRecord> states;  // sorted ascending by (energy, m, n)
};

struct RadialBound {
    double n_sup = 0.0;  // n must satisfy n < n_sup (strict)
    int n_max = -1;      // largest allowed integer n, -1 when none
};

// Closed-form eigenvalue.  The allowed-n bound is NOT enforced here: the
// free-sphere and Landau limit checks evaluate the formula outside it.
double eval_energy(const ModelParams& params, const QuantumNumbers& qn);

// Flat-space (a -> infinity) eigenvalue; requires flat_limit geometry.
double eval_energy_flat(const ModelParams& params, const QuantumNumbers& qn);

// n_sup = mu*omega_m*a^2/hbar - M/2 - 1/2 for the given angular channel.
RadialBound radial_bound(const ModelParams& params, int m);

// lambda1 = lambda2 = 0, nu = 0 special case (Landau levels on the sphere).
double landau_sphere_energy(double a, double b, const QuantumNumbers& qn);

struct EnumerationOptions {
    // Explicit window [m_min, m_max]; when unset the window grows
    // symmetrically until the boundary channels cannot contribute to the
    // lowest max_states energies.
    std::optional<int> m_min;
    std::optional<int> m_max;
    BoundPolicy policy = BoundPolicy::paper;
    std::optional<int> n_cap;  // extra per-channel cap on n
    std::size_t max_states = 256;
};

// All states in the window allowed under the policy, as full records
// (energy, moment, current, rho_m), sorted ascending by (energy, m, n) and
// truncated to max_states.  An empty table is a legitimate result (e.g.
// free sphere under the paper bound), not an error.
SpectrumTable enumerate_states(const ModelParams& params,
                               const EnumerationOptions& opts);

}  // namespace ringsphere
