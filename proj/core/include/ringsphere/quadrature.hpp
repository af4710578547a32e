#pragma once

#include <functional>

namespace ringsphere {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int panels = 0;
};

// Adaptive composite 15-point Gauss-Legendre integration of f over [a, b].
// A panel is accepted when the two-half refinement changes it by less than
// rel_tol relative to the running total (with abs_floor as an absolute
// fallback for near-zero integrals).
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b, double rel_tol = 1e-12,
                                    double abs_floor = 1e-300,
                                    int max_depth = 48);

// Single 15-point Gauss-Legendre panel (used by tests to cross-check the
// adaptive driver).
double gauss_legendre_panel(const std::function<double(double)>& f, double a,
                            double b);

}  // namespace ringsphere
