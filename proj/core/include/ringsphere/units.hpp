#pragma once

#include <string>

namespace ringsphere {

// Internal unit system: hbar = mu = e = c = 1, so omega_c = B, the flux
// quantum Phi0 = 2*pi, and the effective magneton mu_B* = e*hbar/(2*mu*c)
// = 1/2.  All core formulas work in these units; UnitScale only converts
// values on the way in and out.
enum class UnitSystem { natural, material_preset };

enum class QuantityKind { energy, length, field, moment, current };

struct UnitScale {
    UnitSystem system = UnitSystem::natural;
    std::string preset_name = "natural";
    double mass_ratio = 1.0;     // m*/m0
    double energy_unit = 1.0;    // meV per natural energy
    double length_unit = 1.0;    // nm per natural length
    double field_unit = 1.0;     // tesla per natural field
    double moment_unit = 1.0;    // mu_B per mu_B*
    double current_unit = 1.0;   // nA per natural current

    static UnitScale natural();
    // GaAs electrons: m*/m0 = 0.067, energies in meV, lengths in nm,
    // fields in tesla.  The mass ratio is a standard literature value,
    // not specific to any one source.
    static UnitScale gaas();

    bool valid() const;
};

enum class ConvertDirection { to_external, to_natural };

double convert_units(double value, QuantityKind kind, ConvertDirection dir,
                     const UnitScale& units);

// Flux quantum in natural units (hc/e with hbar = e = c = 1).
inline constexpr double phi0 = 6.283185307179586476925286766559;

// Effective magneton e*hbar/(2*mu*c) in natural units.
inline constexpr double mu_b_star = 0.5;

}  // namespace ringsphere
