#include "ringsphere/units.hpp"

#include <cmath>
#include <stdexcept>

namespace ringsphere {

namespace {
// CODATA 2018
constexpr double hbar_si = 1.054571817e-34;       // J s
constexpr double e_si = 1.602176634e-19;          // C
constexpr double me_si = 9.1093837015e-31;        // kg
constexpr double mu_b_si = 9.2740100783e-24;      // J/T
constexpr double mev_si = 1e-3 * e_si;            // J
}  // namespace

UnitScale UnitScale::natural() { return UnitScale{}; }

UnitScale UnitScale::gaas() {
    UnitScale u;
    u.system = UnitSystem::material_preset;
    u.preset_name = "gaas";
    u.mass_ratio = 0.067;
    const double mstar = u.mass_ratio * me_si;
    const double e0 = mev_si;                       // natural energy = 1 meV
    u.energy_unit = 1.0;
    u.length_unit = hbar_si / std::sqrt(mstar * e0) * 1e9;
    u.field_unit = mstar * e0 / (e_si * hbar_si);
    u.moment_unit = 1.0 / u.mass_ratio;             // mu_B* = mu_B * (m0/m*)
    u.current_unit = e0 * e_si / hbar_si * 1e9;     // e*E0/hbar in nA
    return u;
}

bool UnitScale::valid() const {
    return mass_ratio > 0 && energy_unit > 0 && length_unit > 0 &&
           field_unit > 0 && moment_unit > 0 && current_unit > 0;
}

double convert_units(double value, QuantityKind kind, ConvertDirection dir,
                     const UnitScale& units) {
    if (units.system == UnitSystem::natural) return value;
    double scale;
    switch (kind) {
        case QuantityKind::energy: scale = units.energy_unit; break;
        case QuantityKind::length: scale = units.length_unit; break;
        case QuantityKind::field: scale = units.field_unit; break;
        case QuantityKind::moment: scale = units.moment_unit; break;
        case QuantityKind::current: scale = units.current_unit; break;
        default: throw std::invalid_argument("convert_units: unknown quantity kind");
    }
    return dir == ConvertDirection::to_external ? value * scale : value / scale;
}

}  // namespace ringsphere
