#include "ringsphere/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ringsphere/observables.hpp"
#include "ringsphere/spectrum.hpp"

namespace ringsphere {

double RadialOperator::q(double x) const {
    double v = alpha_bar * alpha_bar / x;
    if (gamma > 0.0) v += gamma * gamma / (1.0 - x);
    return v;
}

RadialOperator build_radial_operator(const ModelParams& params, int m) {
    if (params.geometry.flat_limit)
        throw std::invalid_argument("build_radial_operator requires finite a");
    const auto d = derive_state_quantities(params, QuantumNumbers{0, m});
    if (!(d.omega_m > 0.0))
        throw degenerate_frequency_error("build_radial_operator: omega_m = 0");

    RadialOperator op;
    op.m = m;
    op.m_plus_nu = m_plus_nu(params, m);
    op.a = params.geometry.a;
    op.alpha_bar = op.a * op.a * d.omega_m;
    op.gamma = 0.5 * d.M;
    const double r0 = d.rho0 / (2.0 * op.a);
    const double w_eff = d.omega0 * (1.0 + r0 * r0);
    op.kappa_c = std::pow(op.a, 4) * (d.omega_c * d.omega_c + w_eff * w_eff);
    return op;
}

namespace {

void check_grid(const OracleGrid& grid) {
    if (grid.points < 101 || grid.points % 2 == 0)
        throw std::invalid_argument("oracle grid: points must be odd and >= 101");
    if (grid.richardson_levels < 1 || grid.richardson_levels > 3)
        throw std::invalid_argument("oracle grid: richardson_levels must be 1..3");
}

BoundaryAt1 resolve_boundary(const RadialOperator& op, const OracleGrid& grid) {
    if (grid.boundary_at_1) {
        if (*grid.boundary_at_1 == BoundaryAt1::neumann && op.gamma > 0.0)
            throw std::invalid_argument(
                "oracle grid: neumann boundary needs M = 0 (q diverges at x=1)");
        return *grid.boundary_at_1;
    }
    return op.gamma > 0.0 ? BoundaryAt1::dirichlet : BoundaryAt1::neumann;
}

SymTridiagonal assemble(const RadialOperator& op, int points, BoundaryAt1 bc) {
    const double h = 1.0 / (points - 1);
    const int interior = points - 2;
    const int dim = bc == BoundaryAt1::neumann ? interior + 1 : interior;
    SymTridiagonal t;
    t.diag.resize(dim);
    t.off.resize(dim - 1);
    const double inv_h2 = 1.0 / (h * h);
    for (int i = 1; i <= interior; ++i) {
        const double x = i * h;
        const double pm = op.p(x - 0.5 * h);
        const double pp = op.p(x + 0.5 * h);
        t.diag[i - 1] = (pm + pp) * inv_h2 + op.q(x);
        if (i < interior) t.off[i - 1] = -pp * inv_h2;
    }
    if (bc == BoundaryAt1::neumann) {
        // Ghost-point reflection at x=1, symmetrized: the half-cell row has
        // off-diagonal -2p/h^2 against the interior -p/h^2; scaling the last
        // component by sqrt(2) restores symmetry without moving eigenvalues.
        const double pm = op.p(1.0 - 0.5 * h);
        t.diag[dim - 1] = 2.0 * pm * inv_h2 + op.alpha_bar * op.alpha_bar;
        t.off[dim - 2] = -std::sqrt(2.0) * pm * inv_h2;
    }
    return t;
}

bool near_integer(double x) { return std::abs(x - std::round(x)) < 1e-9; }

struct BasisTerm {
    double exponent;
    bool log;  // h^e * ln(1/h) instead of h^e
};

// Error-term exponents of the 3-point scheme for this operator.  The
// regular expansion contributes {2, 4, 6}; an endpoint exponent sigma in
// {alpha_bar, gamma} that is not an integer adds the family {2s, 2s+2, ...},
// and a half-integer sigma additionally produces an h^(2s+1) ln(1/h) term
// where its family collides with the regular one (measured, and classical
// for half-integer indicial exponents).
std::vector<BasisTerm> error_basis(const RadialOperator& op, int levels) {
    std::vector<BasisTerm> items;
    for (double e : {2.0, 4.0, 6.0}) items.push_back({e, false});
    for (double s : {op.alpha_bar, op.gamma}) {
        if (s <= 1e-12 || near_integer(s)) continue;
        for (int k = 0; k < 3; ++k) items.push_back({2.0 * s + 2.0 * k, false});
        if (near_integer(2.0 * s)) items.push_back({2.0 * s + 1.0, true});
    }
    std::sort(items.begin(), items.end(), [](const BasisTerm& a, const BasisTerm& b) {
        if (std::abs(a.exponent - b.exponent) > 1e-9) return a.exponent < b.exponent;
        return a.log && !b.log;  // log dominates the pure power at equal exponent
    });
    std::vector<BasisTerm> out;
    for (const auto& it : items) {
        const bool dup = !out.empty() &&
                         std::abs(out.back().exponent - it.exponent) < 1e-9 &&
                         out.back().log == it.log;
        if (!dup) out.push_back(it);
        if (static_cast<int>(out.size()) == levels) break;
    }
    return out;
}

// Solves the tiny Vandermonde-like system kappa_j = k* + sum_i c_i phi_i(h_j)
// for k*; columns are scaled to unit max to keep the elimination stable.
double extrapolate(const std::vector<int>& grid_points,
                   const std::vector<double>& kappas,
                   const std::vector<BasisTerm>& basis) {
    const int rows = static_cast<int>(grid_points.size());
    const int cols = static_cast<int>(basis.size()) + 1;
    if (rows != cols)
        throw std::logic_error("extrapolate: need one grid per basis term plus one");

    std::vector<std::vector<double>> A(rows, std::vector<double>(cols));
    std::vector<double> rhs = kappas;
    const double h0 = 1.0 / (grid_points.front() - 1);
    for (int j = 0; j < rows; ++j) {
        const double h = 1.0 / (grid_points[j] - 1);
        A[j][0] = 1.0;
        for (int i = 0; i < cols - 1; ++i) {
            double v = std::pow(h / h0, basis[i].exponent);
            if (basis[i].log) v *= std::log(1.0 / h);
            A[j][i + 1] = v;
        }
    }
    for (int i = 1; i < cols; ++i) {
        double mx = 0.0;
        for (int j = 0; j < rows; ++j) mx = std::max(mx, std::abs(A[j][i]));
        if (mx > 0.0)
            for (int j = 0; j < rows; ++j) A[j][i] /= mx;
    }

    // Gaussian elimination with partial pivoting on the (rows x cols) system.
    std::vector<int> perm(rows);
    for (int j = 0; j < rows; ++j) perm[j] = j;
    for (int col = 0; col < cols; ++col) {
        int piv = col;
        for (int j = col + 1; j < rows; ++j)
            if (std::abs(A[j][col]) > std::abs(A[piv][col])) piv = j;
        std::swap(A[col], A[piv]);
        std::swap(rhs[col], rhs[piv]);
        if (A[col][col] == 0.0)
            throw std::runtime_error("extrapolate: singular basis system");
        for (int j = col + 1; j < rows; ++j) {
            const double f = A[j][col] / A[col][col];
            for (int i = col; i < cols; ++i) A[j][i] -= f * A[col][i];
            rhs[j] -= f * rhs[col];
        }
    }
    std::vector<double> sol(cols);
    for (int j = cols - 1; j >= 0; --j) {
        double s = rhs[j];
        for (int i = j + 1; i < cols; ++i) s -= A[j][i] * sol[i];
        sol[j] = s / A[j][j];
    }
    return sol[0];
}

std::vector<int> ladder_grids(const OracleGrid& grid) {
    const int levels = grid.richardson_levels;
    std::vector<int> pts;
    for (int j = levels - 1; j >= 1; --j) {
        const int span = grid.points - 1;
        if (span % (1 << j) != 0)
            throw std::invalid_argument("oracle grid: points-1 must be divisible by 2^(levels-1)");
        pts.push_back(span / (1 << j) + 1);
    }
    pts.push_back(grid.points);
    pts.push_back(2 * (grid.points - 1) + 1);
    if (pts.front() < 101)
        throw std::invalid_argument(
            "oracle grid: coarsest ladder grid below 101 points; raise points or lower levels");
    return pts;
}

}  // namespace

std::vector<double> fd_eigenvalues(const RadialOperator& op,
                                   const OracleGrid& grid, int k) {
    check_grid(grid);
    if (k < 1) throw std::invalid_argument("fd_eigenvalues: k must be >= 1");
    const auto t = assemble(op, grid.points, resolve_boundary(op, grid));
    if (static_cast<std::size_t>(k) > t.dim())
        throw std::invalid_argument("fd_eigenvalues: k exceeds matrix dimension");
    return lowest_eigenvalues(t, k);
}

std::vector<double> richardson(const std::vector<double>& coarse,
                               const std::vector<double>& fine) {
    if (coarse.size() != fine.size())
        throw std::invalid_argument("richardson: mismatched eigenvalue counts");
    std::vector<double> out(coarse.size());
    for (std::size_t i = 0; i < coarse.size(); ++i)
        out[i] = (4.0 * fine[i] - coarse[i]) / 3.0;
    return out;
}

std::vector<double> oracle_energies(const ModelParams& params, int m, int count,
                                    const OracleGrid& grid) {
    check_grid(grid);
    if (count < 1) throw std::invalid_argument("oracle_energies: count must be >= 1");
    const RadialOperator op = build_radial_operator(params, m);
    const BoundaryAt1 bc = resolve_boundary(op, grid);
    const auto pts = ladder_grids(grid);
    const auto basis = error_basis(op, grid.richardson_levels);

    std::vector<std::vector<double>> per_grid;
    per_grid.reserve(pts.size());
    for (int p : pts)
        per_grid.push_back(lowest_eigenvalues(assemble(op, p, bc), count));

    std::vector<double> out(count);
    std::vector<double> kap(pts.size());
    for (int n = 0; n < count; ++n) {
        for (std::size_t j = 0; j < pts.size(); ++j) kap[j] = per_grid[j][n];
        out[n] = op.kappa_to_energy(extrapolate(pts, kap, basis));
    }
    return out;
}

double oracle_energy(const ModelParams& params, const QuantumNumbers& qn,
                     const OracleGrid& grid) {
    return oracle_energies(params, qn.m, qn.n + 1, grid).back();
}

Derivative diff_energy(const EnergyFn& energy, DiffVariable wrt,
                       const ModelParams& params, const QuantumNumbers& qn) {
    const auto eval_at = [&](double delta) {
        ModelParams p = params;
        if (wrt == DiffVariable::b) {
            p.fields.b += delta;
        } else {
            p.fields.nu += delta / phi0;  // Phi_AB = Phi0 * nu
        }
        const double e = energy(p, qn);
        if (!std::isfinite(e))
            throw std::domain_error("diff_energy: energy evaluation not finite");
        return e;
    };
    const double base =
        wrt == DiffVariable::b ? params.fields.b : phi0 * params.fields.nu;
    const double h0 = 1e-4 * std::max(1.0, std::abs(base));

    const auto central = [&](double h) {
        return (eval_at(h) - eval_at(-h)) / (2.0 * h);
    };
    const double d1 = central(h0);
    const double d2 = central(0.5 * h0);
    Derivative out;
    out.value = (4.0 * d2 - d1) / 3.0;
    out.error_estimate = std::abs(d2 - d1) / 3.0;
    return out;
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::half: return "half";
        case Verdict::full: return "full";
        default: return "inconclusive";
    }
}

ValidationReport validate(const ModelParams& params,
                          const std::vector<QuantumNumbers>& states,
                          double tolerance, const OracleGrid& grid) {
    ValidationReport rep;
    rep.params = params;
    rep.grid = grid;
    rep.summary.tolerance = tolerance;

    ModelParams half = params;
    half.convention = Convention::half;
    ModelParams full = params;
    full.convention = Convention::full;

    // Group states by m so each angular channel is solved once.
    std::vector<QuantumNumbers> sorted = states;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        return a.m != b.m ? a.m < b.m : a.n < b.n;
    });

    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        int n_max_req = 0;
        while (j < sorted.size() && sorted[j].m == sorted[i].m) {
            n_max_req = std::max(n_max_req, sorted[j].n);
            ++j;
        }
        const int m = sorted[i].m;
        const auto oracle = oracle_energies(params, m, n_max_req + 1, grid);
        const auto bound = radial_bound(params, m);

        for (std::size_t s = i; s < j; ++s) {
            const QuantumNumbers qn = sorted[s];
            ValidationRow row;
            row.qn = qn;
            row.e_closed_half = eval_energy(half, qn);
            row.e_closed_full = eval_energy(full, qn);
            row.e_oracle = oracle[qn.n];
            const double denom = std::max(std::abs(row.e_oracle), 1e-300);
            row.rel_err_half = std::abs(row.e_closed_half - row.e_oracle) / denom;
            row.rel_err_full = std::abs(row.e_closed_full - row.e_oracle) / denom;

            const auto d = derive_state_quantities(params, qn);
            row.slow_convergence = d.M > 0.0 && d.M < 0.1;
            row.beyond_bound = qn.n > bound.n_max;

            const auto dEdB = diff_energy(eval_energy, DiffVariable::b, half, qn);
            const double moment_nat = mu_b_star * state_moment(half, qn);
            row.moment_deriv_rel_err = std::abs(-dEdB.value - moment_nat) /
                                       std::max(std::abs(moment_nat), 1e-12);
            if (d.M > 0.0) {
                const auto dEdPhi = diff_energy(eval_energy, DiffVariable::flux, half, qn);
                const double cur = state_current(half, qn);
                row.current_deriv_rel_err =
                    std::abs(-dEdPhi.value - cur) / std::max(std::abs(cur), 1e-12);
            } else {
                row.current_deriv_rel_err = std::numeric_limits<double>::quiet_NaN();
            }

            rep.summary.max_rel_err_half =
                std::max(rep.summary.max_rel_err_half, row.rel_err_half);
            rep.summary.max_rel_err_full =
                std::max(rep.summary.max_rel_err_full, row.rel_err_full);
            rep.rows.push_back(row);
        }
        i = j;
    }

    const bool half_ok = rep.summary.max_rel_err_half < tolerance;
    const bool full_ok = rep.summary.max_rel_err_full < tolerance;
    if (half_ok && !full_ok)
        rep.summary.verdict = Verdict::half;
    else if (full_ok && !half_ok)
        rep.summary.verdict = Verdict::full;
    else
        rep.summary.verdict = Verdict::inconclusive;
    return rep;
}

}  // namespace ringsphere
