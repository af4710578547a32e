#include "ringsphere/quadrature.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace ringsphere {

namespace {

struct GaussRule {
    std::array<double, 15> nodes;    // on [-1, 1]
    std::array<double, 15> weights;
};

// Nodes are the roots of P_15, found by Newton iteration from the Chebyshev
// initial guess; weights from 2/((1-x^2) P'_15(x)^2).  Computed once.
GaussRule make_rule() {
    GaussRule r;
    constexpr int n = 15;
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        r.nodes[n - 1 - i] = x;
        r.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

const GaussRule& rule() {
    static const GaussRule r = make_rule();
    return r;
}

double panel(const std::function<double(double)>& f, double a, double b) {
    const auto& r = rule();
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 15; ++i) s += r.weights[i] * f(mid + half * r.nodes[i]);
    return s * half;
}

}  // namespace

double gauss_legendre_panel(const std::function<double(double)>& f, double a,
                            double b) {
    return panel(f, a, b);
}

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b, double rel_tol,
                                    double abs_floor, int max_depth) {
    if (!(b > a)) throw std::invalid_argument("integrate_adaptive: need b > a");

    struct Task {
        double a, b, whole;
        int depth;
    };

    // First pass: split into 8 seed panels so a sharply peaked integrand
    // cannot hide inside a single panel's quadrature points.
    std::vector<Task> stack;
    QuadratureResult out;
    const int seeds = 8;
    for (int i = 0; i < seeds; ++i) {
        const double lo = a + (b - a) * i / seeds;
        const double hi = a + (b - a) * (i + 1) / seeds;
        stack.push_back(Task{lo, hi, panel(f, lo, hi), 0});
    }

    double total_scale = 0.0;
    for (const auto& t : stack) total_scale += std::abs(t.whole);

    while (!stack.empty()) {
        const Task t = stack.back();
        stack.pop_back();
        const double mid = 0.5 * (t.a + t.b);
        const double left = panel(f, t.a, mid);
        const double right = panel(f, mid, t.b);
        const double refined = left + right;
        const double err = std::abs(refined - t.whole);
        total_scale = std::max(total_scale, std::abs(refined));
        const double tol = std::max(rel_tol * total_scale, abs_floor);
        if (err < tol || t.depth >= max_depth) {
            out.value += refined;
            out.error_estimate += err;
            out.panels += 2;
        } else {
            stack.push_back(Task{t.a, mid, left, t.depth + 1});
            stack.push_back(Task{mid, t.b, right, t.depth + 1});
        }
    }
    return out;
}

}  // namespace ringsphere
