#pragma once

#include <utility>
#include <vector>

#include "ringsphere/model.hpp"

namespace ringsphere {

class non_normalizable_error : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

// Radial factor of Psi = e^{i m phi}/sqrt(2 pi) * f_m(x):
//   f(x) = x^alpha (1-x)^gamma F(-n, n+1+2alpha+2gamma, 1+2alpha; x)
// with alpha = mu a^2 omega_m / hbar and gamma = M/2.  The hypergeometric
// factor truncates to a degree-n polynomial, held here by its series
// coefficients.
struct RadialProfile {
    QuantumNumbers qn;
    double alpha = 0.0;
    double gamma = 0.0;
    std::vector<double> poly_coeffs;  // n+1 entries, coefficient of x^k
    double norm = 0.0;      // c with 2a^2 Int (c f)^2 dx = 1; set by normalize
    double log_norm = 0.0;  // log(norm); usable when norm itself overflows
    bool normalized = false;
};

// Sign and log-magnitude of a profile value; profiles with alpha ~ 1e3
// underflow in linear space long before they stop mattering.
struct LogValue {
    double log_abs = 0.0;  // -inf encodes an exact zero
    int sign = 0;
};

// Truncated Gauss hypergeometric F(-n, bp, cp; x) evaluated by the term
// recurrence; exact polynomial, no truncation error.  cp must not be a
// nonpositive integer above -(n-1) (the recurrence would divide by zero).
double hypergeom_poly(int n, double bp, double cp, double x);

// Unnormalized profile for a state; norm is filled in by normalize().
RadialProfile radial_profile(const ModelParams& params, const QuantumNumbers& qn);

// Computes c such that 2a^2 Int_0^1 (c f)^2 dx = 1 and stores it in the
// profile.  Quadrature is composite Gauss-Legendre, subdivided around the
// density peak before adaptive refinement.
double normalize(RadialProfile& profile, const Geometry& geometry);

// Unnormalized f(x) in log space.
LogValue profile_log_eval(const RadialProfile& profile, double x);

// Normalized c*f(x) in linear space (0 when underflowed; fine for
// densities, use profile_log_eval for ratios).
double profile_eval(const RadialProfile& profile, double x);

// 2a^2 Int f1 f2 dx for normalized profiles of equal m.
double overlap(const ModelParams& params, const QuantumNumbers& qn1,
               const QuantumNumbers& qn2);

enum class Coordinate { rho, theta, x };

// Probability density against the requested coordinate, with the measure
// Jacobian folded in so the density integrates to 1 over that coordinate.
std::vector<std::pair<double, double>> density_samples(
    const ModelParams& params, const QuantumNumbers& qn, Coordinate coord,
    const std::vector<double>& grid);

// Number of interior sign changes of the polynomial factor (= radial node
// count of the state).
int profile_nodes(const RadialProfile& profile, int samples = 20001);

// radial_profile + normalize in one call.
RadialProfile normalized_profile(const ModelParams& params,
                                 const QuantumNumbers& qn);

}  // namespace ringsphere
