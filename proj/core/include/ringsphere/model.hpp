#pragma once

#include <stdexcept>
#include <vector>

#include "ringsphere/units.hpp"

namespace ringsphere {

// Thrown when a quantity that needs omega_m > 0 is requested for a state
// with omega_m = 0 (only possible at lambda1 = lambda2 = 0 with
// omega_c = -(m+nu)/(2 a^2) exactly).
class degenerate_frequency_error : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

struct Geometry {
    double a = 1.0;           // sphere radius
    bool flat_limit = false;  // a = infinity; `a` is ignored when set

    bool valid() const { return flat_limit || a > 0.0; }
};

struct Confinement {
    double lambda1 = 0.0;  // energy/length^2
    double lambda2 = 0.0;  // energy*length^2

    bool valid() const { return lambda1 >= 0.0 && lambda2 >= 0.0; }
};

struct Fields {
    double b = 0.0;   // uniform magnetic field
    double nu = 0.0;  // Aharonov-Bohm flux ratio, Phi_AB/Phi0
};

// Coefficient of the omega_c*(m+nu) energy term.  The source equations are
// internally inconsistent about the factor (1 vs 1/2); both are carried
// through every formula and the oracle adjudicates.
enum class Convention { half, full };

struct QuantumNumbers {
    int n = 0;  // radial, >= 0
    int m = 0;  // angular

    bool valid() const { return n >= 0; }
};

struct ModelParams {
    Geometry geometry;
    Confinement confinement;
    Fields fields;
    Convention convention = Convention::half;
    UnitScale units = UnitScale::natural();

    bool valid() const {
        return geometry.valid() && confinement.valid() && units.valid();
    }
};

struct ConfinementScales {
    double omega0 = 0.0;
    double rho0 = 0.0;
    double v0 = 0.0;
};

struct DerivedQuantities {
    double omega0 = 0.0;
    double rho0 = 0.0;
    double v0 = 0.0;
    double omega_c = 0.0;  // = B in natural units, sign follows B
    double M = 0.0;        // sqrt((m+nu)^2 + (mu*omega0*rho0^2/2hbar)^2)
    double omega_m = 0.0;
    double rho_m = 0.0;    // sqrt(2*hbar*M/(mu*omega_m)), needs omega_m > 0
};

// omega0, rho0, V0 from the confinement parameters.  lambda1 = lambda2 = 0
// returns all zeros by convention (the rho0 formula is 0/0 there but every
// rho0-bearing term is a product that vanishes).
ConfinementScales derive_confinement(const Confinement& c, const Geometry& g);

// V(rho) = lambda1*rho^2 + (lambda2/rho^2)*(1+(rho/2a)^2)^2 - V0.
// Grid points must be strictly positive.
std::vector<double> sample_potential(const ModelParams& params,
                                     const std::vector<double>& rho_grid);

// Stereographic coordinate maps.  theta in (0,pi), rho > 0, x in (0,1).
double rho_from_theta(const Geometry& g, double theta);
double theta_from_rho(const Geometry& g, double rho);
double x_from_rho(const Geometry& g, double rho);
double rho_from_x(const Geometry& g, double x);
double x_from_theta(double theta);

// All per-state scalars.  rho_m is set to 0 when omega_m = 0; calling code
// that needs rho_m must check omega_m (or use require_rho_m).
DerivedQuantities derive_state_quantities(const ModelParams& params,
                                          const QuantumNumbers& qn);

// rho_m with the degenerate case turned into an error.
double require_rho_m(const ModelParams& params, const QuantumNumbers& qn);

// m + nu as a single double; every formula depends on m and nu only
// through this sum.
inline double m_plus_nu(const ModelParams& params, int m) {
    return static_cast<double>(m) + params.fields.nu;
}

}  // namespace ringsphere
