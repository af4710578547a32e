#pragma once

#include <vector>

#include "ringsphere/spectrum.hpp"

namespace ringsphere {

class insufficient_states_error : public std::runtime_error {
  public:
    insufficient_states_error(std::size_t needed, std::size_t available);
    std::size_t needed;
    std::size_t available;
};

// Per-state magnetic moment in units of mu_B*:
//   M/mu_B* = -[(2n+M+1)(omega_c + (m+nu)/(2a^2))/omega_m + 2*c_omega*(m+nu)]
// With c_omega = 1/2 this equals -dE/dB of the closed-form energy exactly;
// with c_omega = 1 it equals -dE/dB of the full-convention energy.
double state_moment(const ModelParams& params, const QuantumNumbers& qn);

// Persistent current from the closed form
//   I = (c/(pi*rho_m^2)) * { M_moment*[1+(rho_m/2a)^2]
//                            + mu_B**(omega_c/omega_m)*(2n+1) }
// Defined only for M > 0 (rho_m > 0).
double state_current(const ModelParams& params, const QuantumNumbers& qn);

// Algebraic inverse of state_current: recovers the moment (in mu_B*) from a
// current value.
double moment_from_current(const ModelParams& params, const QuantumNumbers& qn,
                           double current);

struct EnsembleSpec {
    int electrons = 1;
    double temperature = 0.0;  // natural units, k_B = 1
};

struct OccupiedState {
    StateRecord state;
    double weight = 0.0;  // Fermi occupation in [0, 1]
};

struct EnsembleResult {
    std::vector<OccupiedState> occupation;
    double chemical_potential = 0.0;  // NaN at T = 0
    double total_moment = 0.0;        // in mu_B*
    double total_current = 0.0;       // sum over states with defined current
    bool has_undefined_current = false;
    bool degenerate_fill = false;     // T = 0 tie at the Fermi level
};

// T = 0 filling: occupies the N lowest-(E, m, n) states of the table.
EnsembleResult fill_T0(const ModelParams& params, const EnsembleSpec& spec,
                       const SpectrumTable& table);

// Solves sum_i 1/(exp((E_i - mu)/T) + 1) = N by bisection to residual
// < 1e-10.  Rejects when the table's highest state would be occupied above
// 1e-12 (window too small to trust the sum).
double chemical_potential(const EnsembleSpec& spec, const SpectrumTable& table);

// T = 0 delegates to fill_T0; T > 0 computes the Fermi-weighted sums.
EnsembleResult total_magnetization(const ModelParams& params,
                                   const EnsembleSpec& spec,
                                   const SpectrumTable& table);

// Convenience overload that enumerates first.
EnsembleResult total_magnetization(const ModelParams& params,
                                   const EnsembleSpec& spec,
                                   const EnumerationOptions& opts);

}  // namespace ringsphere
