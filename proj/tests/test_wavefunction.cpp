#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ringsphere/wavefunction.hpp"

using namespace ringsphere;

namespace {

ModelParams make(double a, double l1, double l2, double b = 0.0, double nu = 0.0) {
    ModelParams p;
    p.geometry.a = a;
    p.confinement = {l1, l2};
    p.fields = {b, nu};
    return p;
}

double poly_at(const RadialProfile& p, double x) {
    double v = 0.0;
    for (auto it = p.poly_coeffs.rbegin(); it != p.poly_coeffs.rend(); ++it)
        v = v * x + *it;
    return v;
}

}  // namespace

TEST_CASE("hypergeom_poly") {
    CHECK(hypergeom_poly(0, 4.5, 2.0, 0.7) == 1.0);
    CHECK(hypergeom_poly(1, 3.0, 2.0, 0.4) == doctest::Approx(1.0 - 1.5 * 0.4));
    // n=2, b'=3, c'=2, x=0.5: 1 - 3x/2... the three terms are 1, -1.5, 0.5
    CHECK(hypergeom_poly(2, 3.0, 2.0, 0.5) == doctest::Approx(0.0).scale(1.0));
    CHECK_THROWS_AS(hypergeom_poly(3, 1.0, -2.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(hypergeom_poly(2, 1.0, 0.0, 0.5), std::invalid_argument);
    // c' = -3 is outside the first n terms for n=2, so it is fine
    CHECK(hypergeom_poly(2, 1.0, -3.0, 0.5) ==
          doctest::Approx(1.0 + (-2.0) * 1.0 / ((-3.0) * 1.0) * 0.5 +
                          (-2.0) * (-1.0) * 1.0 * 2.0 / ((-3.0) * (-2.0) * 2.0) * 0.25));
}

TEST_CASE("series truncation is exact") {
    // With a' = -n the term recurrence hits the factor (k - n) = 0, so every
    // coefficient beyond degree n is identically zero, not merely small.
    const auto p = make(10.0, 1.0, 1.0, 0.5, 0.3);
    for (int n : {0, 1, 2, 5}) {
        const auto prof = radial_profile(p, {n, 2});
        REQUIRE(prof.poly_coeffs.size() == static_cast<std::size_t>(n) + 1);
        const double bp = n + 1.0 + 2.0 * prof.alpha + 2.0 * prof.gamma;
        const double cp = 1.0 + 2.0 * prof.alpha;
        double coef = 1.0;
        for (int k = 0; k <= n + 3; ++k) {
            if (k <= n) {
                CHECK(coef == prof.poly_coeffs[k]);
            } else {
                CHECK(coef == 0.0);
            }
            coef = coef * (static_cast<double>(k) - n) * (bp + k) /
                   ((cp + k) * (k + 1.0));
        }
    }
}

TEST_CASE("radial_profile shapes") {
    SUBCASE("n = 0 has a unit polynomial factor") {
        const auto prof = radial_profile(make(5.0, 1.0, 2.0, 0.4), {0, 1});
        REQUIRE(prof.poly_coeffs.size() == 1);
        CHECK(prof.poly_coeffs[0] == 1.0);
    }
    SUBCASE("free sphere m=1 gives sqrt(x(1-x))") {
        const auto prof = radial_profile(make(1.0, 0.0, 0.0), {0, 1});
        CHECK(prof.alpha == doctest::Approx(0.5));
        CHECK(prof.gamma == doctest::Approx(0.5));
        for (double x : {0.1, 0.5, 0.9}) {
            const auto lv = profile_log_eval(prof, x);
            CHECK(lv.sign == 1);
            CHECK(std::exp(lv.log_abs) ==
                  doctest::Approx(std::sqrt(x * (1.0 - x))).epsilon(1e-13));
        }
    }
    SUBCASE("endpoint exponents via log-log slopes") {
        const auto prof = radial_profile(make(3.0, 1.0, 1.5, 0.8, 0.2), {1, 2});
        auto slope0 = [&](double x1, double x2) {
            return (profile_log_eval(prof, x2).log_abs -
                    profile_log_eval(prof, x1).log_abs) /
                   (std::log(x2) - std::log(x1));
        };
        CHECK(slope0(1e-8, 1e-7) == doctest::Approx(prof.alpha).epsilon(1e-6));
        auto slope1 = [&](double e1, double e2) {
            return (profile_log_eval(prof, 1.0 - e2).log_abs -
                    profile_log_eval(prof, 1.0 - e1).log_abs) /
                   (std::log(e2) - std::log(e1));
        };
        CHECK(slope1(1e-8, 1e-7) == doctest::Approx(prof.gamma).epsilon(1e-6));
    }
    SUBCASE("degenerate omega_m and flat geometry are rejected") {
        CHECK_THROWS_AS(radial_profile(make(1.0, 0.0, 0.0, -1.0), {0, 2}),
                        degenerate_frequency_error);
        ModelParams flat;
        flat.geometry.flat_limit = true;
        flat.confinement = {1.0, 1.0};
        CHECK_THROWS_AS(radial_profile(flat, {0, 1}), std::invalid_argument);
    }
}

TEST_CASE("normalize") {
    SUBCASE("free sphere m=1 constant is sqrt(3)") {
        auto prof = radial_profile(make(1.0, 0.0, 0.0), {0, 1});
        const double c = normalize(prof, Geometry{1.0, false});
        CHECK(c == doctest::Approx(std::sqrt(3.0)).epsilon(1e-9));
    }
    SUBCASE("prescaling divides out") {
        const auto p = make(8.0, 1.0, 2.0, 0.3, 0.1);
        auto prof = radial_profile(p, {2, 3});
        auto scaled = prof;
        for (auto& c : scaled.poly_coeffs) c *= 40.0;
        const double c1 = normalize(prof, p.geometry);
        const double c2 = normalize(scaled, p.geometry);
        CHECK(c2 == doctest::Approx(c1 / 40.0).epsilon(1e-12));
    }
    SUBCASE("normalized density re-integrates to one") {
        std::mt19937 rng(1301);
        std::uniform_real_distribution<double> u(0.2, 2.0);
        std::uniform_int_distribution<int> mi(-4, 4);
        std::uniform_int_distribution<int> ni(0, 3);
        for (int trial = 0; trial < 10; ++trial) {
            const auto p = make(2.0 + 8.0 * u(rng), u(rng), u(rng), u(rng), u(rng));
            const QuantumNumbers qn{ni(rng), mi(rng)};
            CHECK(overlap(p, qn, qn) == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
    SUBCASE("large-alpha profile does not underflow") {
        // a^2*omega_m ~ 4e4: x^alpha underflows any direct representation
        const auto p = make(100.0, 1.0, 1.0, 4.0, 0.0);
        const auto prof = normalized_profile(p, {0, 5});
        CHECK(std::isfinite(prof.log_norm));
        CHECK(overlap(p, {0, 5}, {0, 5}) == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("overlap and the Gram matrix") {
    const auto p = make(10.0, 1.0, 1.0, 1.0, 0.3);
    SUBCASE("orthogonality of n=0 and n=1") {
        CHECK(std::abs(overlap(p, {0, 2}, {1, 2})) < 1e-8);
    }
    SUBCASE("symmetry is exact") {
        CHECK(overlap(p, {0, 2}, {3, 2}) == overlap(p, {3, 2}, {0, 2}));
    }
    SUBCASE("mixed m is rejected") {
        CHECK_THROWS_AS(overlap(p, {0, 1}, {0, 2}), std::invalid_argument);
    }
    SUBCASE("five-state Gram matrix") {
        for (int m : {-1, 0, 2}) {
            for (int i = 0; i < 5; ++i) {
                for (int j = i; j < 5; ++j) {
                    const double g = overlap(p, {i, m}, {j, m});
                    if (i == j)
                        CHECK(g == doctest::Approx(1.0).epsilon(1e-9));
                    else
                        CHECK(std::abs(g) < 1e-8);
                }
            }
        }
    }
}

TEST_CASE("node counts equal n") {
    const auto p = make(10.0, 1.0, 1.0, 0.5, 0.3);
    for (int n = 0; n <= 3; ++n) {
        const auto prof = radial_profile(p, {n, 2});
        CHECK(profile_nodes(prof) == n);
    }
    // also via strict sign alternations of the full profile on a fine grid
    for (int n = 0; n <= 3; ++n) {
        const auto prof = radial_profile(p, {n, 1});
        int flips = 0, last = 0;
        for (int i = 1; i < 10000; ++i) {
            const double x = i / 10000.0;
            const int s = poly_at(prof, x) > 0.0 ? 1 : -1;
            if (last != 0 && s != last) ++flips;
            last = s;
        }
        CHECK(flips == n);
    }
}

TEST_CASE("density_samples") {
    SUBCASE("free-sphere x-density is 6x(1-x)") {
        const auto p = make(1.0, 0.0, 0.0);
        std::vector<double> grid;
        for (int i = 1; i < 100; ++i) grid.push_back(i / 100.0);
        const auto d = density_samples(p, {0, 1}, Coordinate::x, grid);
        for (const auto& [x, val] : d) {
            CHECK(val == doctest::Approx(6.0 * x * (1.0 - x)).epsilon(1e-8));
            const double mirrored = 6.0 * (1.0 - x) * x;
            CHECK(val == doctest::Approx(mirrored));
        }
    }
    SUBCASE("trapezoid integral close to one") {
        const auto p = make(10.0, 1.0, 1.0, 0.5, 0.0);
        for (auto coord : {Coordinate::x, Coordinate::theta}) {
            std::vector<double> grid;
            const int npts = 100000;
            const double hi = coord == Coordinate::x ? 1.0 : M_PI;
            for (int i = 1; i < npts; ++i)
                grid.push_back(hi * static_cast<double>(i) / npts);
            const auto d = density_samples(p, {1, 2}, coord, grid);
            double integral = 0.0;
            for (std::size_t i = 1; i < d.size(); ++i)
                integral += 0.5 * (d[i].second + d[i - 1].second) *
                            (d[i].first - d[i - 1].first);
            CHECK(integral == doctest::Approx(1.0).epsilon(1e-6));
        }
    }
    SUBCASE("strong ring peaks near rho0") {
        // omega0 = sqrt(8*40.0...) >> omega_c and 1/a^2
        const auto p = make(10.0, 40.0, 40.0, 0.1, 0.0);
        const auto scales = derive_confinement(p.confinement, p.geometry);
        std::vector<double> grid;
        for (int i = 1; i <= 3000; ++i)
            grid.push_back(3.0 * scales.rho0 * i / 3000.0);
        const auto d = density_samples(p, {0, 1}, Coordinate::rho, grid);
        double best = -1.0, best_rho = 0.0;
        for (const auto& [rho, val] : d)
            if (val > best) {
                best = val;
                best_rho = rho;
            }
        CHECK(std::abs(best_rho - scales.rho0) / scales.rho0 < 0.05);
    }
    SUBCASE("out-of-range grid rejected") {
        const auto p = make(1.0, 1.0, 1.0);
        CHECK_THROWS_AS(density_samples(p, {0, 1}, Coordinate::x, {1.0}),
                        std::invalid_argument);
        CHECK_THROWS_AS(density_samples(p, {0, 1}, Coordinate::theta, {M_PI}),
                        std::invalid_argument);
        CHECK_THROWS_AS(density_samples(p, {0, 1}, Coordinate::rho, {0.0}),
                        std::invalid_argument);
    }
}

TEST_CASE("non-normalizable profiles are rejected") {
    auto prof = radial_profile(make(1.0, 0.0, 0.0), {0, 1});
    prof.alpha = -0.5;  // integral of x^(2*alpha) diverges at 0
    CHECK_THROWS_AS(normalize(prof, Geometry{1.0, false}), non_normalizable_error);
}
