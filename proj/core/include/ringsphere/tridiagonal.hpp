#pragma once

#include <cstddef>
#include <vector>

namespace ringsphere {

// Symmetric tridiagonal matrix: diag has the dimension, off one entry less.
struct SymTridiagonal {
    std::vector<double> diag;
    std::vector<double> off;

    std::size_t dim() const { return diag.size(); }
    bool valid() const { return !diag.empty() && off.size() + 1 == diag.size(); }
};

// Number of eigenvalues strictly below sigma (Sturm sequence sign count).
int sturm_count(const SymTridiagonal& t, double sigma);

// The k smallest eigenvalues, ascending, by Sturm-sequence bisection.
// Each eigenvalue is bisected until the bracket width falls below a few
// ulps of its magnitude (always tighter than 1e-12 * max(1, |kappa|)).
std::vector<double> lowest_eigenvalues(const SymTridiagonal& t, int k);

}  // namespace ringsphere
