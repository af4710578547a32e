#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ringsphere/model.hpp"
#include "ringsphere/units.hpp"

using namespace ringsphere;

namespace {

ModelParams ring_params(double a, double l1, double l2, double b = 0.0,
                        double nu = 0.0) {
    ModelParams p;
    p.geometry.a = a;
    p.confinement = {l1, l2};
    p.fields = {b, nu};
    return p;
}

ModelParams flat_params(double l1, double l2, double b = 0.0, double nu = 0.0) {
    ModelParams p;
    p.geometry.flat_limit = true;
    p.geometry.a = std::numeric_limits<double>::infinity();
    p.confinement = {l1, l2};
    p.fields = {b, nu};
    return p;
}

}  // namespace

TEST_CASE("natural unit constants") {
    CHECK(phi0 == 2.0 * M_PI);
    CHECK(mu_b_star == 0.5);
    const auto nat = UnitScale::natural();
    CHECK(nat.valid());
    CHECK(convert_units(3.7, QuantityKind::energy, ConvertDirection::to_external, nat) == 3.7);
    CHECK(convert_units(-1.25, QuantityKind::moment, ConvertDirection::to_natural, nat) == -1.25);
}

TEST_CASE("gaas preset scales") {
    const auto g = UnitScale::gaas();
    CHECK(g.valid());
    CHECK(g.mass_ratio == 0.067);
    // energy anchor is 1 meV per natural energy
    CHECK(convert_units(2.0, QuantityKind::energy, ConvertDirection::to_external, g) ==
          doctest::Approx(2.0));
    // mu_B* in true Bohr magnetons is m0/m*
    CHECK(convert_units(1.0, QuantityKind::moment, ConvertDirection::to_external, g) ==
          doctest::Approx(1.0 / 0.067));
    // the magnetic length scale for GaAs at 1 meV is tens of nm
    CHECK(g.length_unit > 20.0);
    CHECK(g.length_unit < 50.0);
    CHECK(g.field_unit > 0.3);
    CHECK(g.field_unit < 1.5);

    std::mt19937 rng(8811);
    std::uniform_real_distribution<double> dist(-1e3, 1e3);
    const QuantityKind kinds[] = {QuantityKind::energy, QuantityKind::length,
                                  QuantityKind::field, QuantityKind::moment,
                                  QuantityKind::current};
    for (int i = 0; i < 1000; ++i) {
        const double v = dist(rng);
        const auto kind = kinds[i % 5];
        const double back = convert_units(
            convert_units(v, kind, ConvertDirection::to_external, g), kind,
            ConvertDirection::to_natural, g);
        CHECK(back == doctest::Approx(v).epsilon(1e-14));
    }
}

TEST_CASE("derive_confinement closed forms") {
    SUBCASE("lambda2 = 0 collapses to a harmonic dot") {
        const auto s = derive_confinement({0.5, 0.0}, {1.0, false});
        CHECK(s.omega0 == doctest::Approx(std::sqrt(4.0)));
        CHECK(s.rho0 == 0.0);
        CHECK(s.v0 == 0.0);
    }
    SUBCASE("lambda1 = 0 antidot on the sphere: rho0 = 2a") {
        const auto s = derive_confinement({0.0, 1.0}, {1.0, false});
        CHECK(s.rho0 == doctest::Approx(2.0));
        CHECK(s.omega0 == doctest::Approx(std::sqrt(8.0 / 16.0)));
        CHECK(s.v0 == doctest::Approx(0.5 + 2.0 * 0.25));
    }
    SUBCASE("unit ring on the unit sphere") {
        const auto s = derive_confinement({1.0, 1.0}, {1.0, false});
        CHECK(s.rho0 == doctest::Approx(0.98496).epsilon(1e-5));
        CHECK(s.omega0 == doctest::Approx(std::sqrt(8.5)));
        CHECK(s.v0 == doctest::Approx(0.5 + 2.0 * std::sqrt(1.0625)));
    }
    SUBCASE("free particle") {
        const auto s = derive_confinement({0.0, 0.0}, {2.0, false});
        CHECK(s.omega0 == 0.0);
        CHECK(s.rho0 == 0.0);
        CHECK(s.v0 == 0.0);
    }
    SUBCASE("flat limits") {
        const auto s = derive_confinement({1.0, 4.0}, {0.0, true});
        CHECK(s.rho0 == doctest::Approx(std::sqrt(2.0)));
        CHECK(s.v0 == doctest::Approx(4.0));
        CHECK(s.omega0 == doctest::Approx(std::sqrt(8.0)));
        CHECK_THROWS_AS(derive_confinement({0.0, 1.0}, {0.0, true}), std::domain_error);
    }
    SUBCASE("invariant forms") {
        // omega0^2 = 8*lambda_eff and rho0^4*lambda_eff = lambda2
        for (double a : {0.5, 1.0, 10.0, 250.0}) {
            const auto s = derive_confinement({0.3, 1.7}, {a, false});
            const double lambda_eff = 0.3 + 1.7 / std::pow(2.0 * a, 4);
            CHECK(s.omega0 * s.omega0 == doctest::Approx(8.0 * lambda_eff));
            CHECK(std::pow(s.rho0, 4) * lambda_eff == doctest::Approx(1.7));
        }
    }
}

TEST_CASE("sample_potential") {
    SUBCASE("zero at the minimum") {
        const auto p = ring_params(1.0, 1.0, 1.0);
        const auto s = derive_confinement(p.confinement, p.geometry);
        const auto v = sample_potential(p, {s.rho0});
        CHECK(std::abs(v[0]) < 1e-14);
    }
    SUBCASE("flat Tan-Inkson at rho = 1") {
        const auto v = sample_potential(flat_params(1.0, 1.0), {1.0});
        CHECK(v[0] == 0.0);  // 1 + 1 - 2, exact in floating point
    }
    SUBCASE("dot limit at theta = pi/2") {
        // rho = 2a tan(theta/2) = 2: pure lambda1 rho^2 = 4 lambda1 a^2
        const auto p = ring_params(1.0, 0.7, 0.0);
        const double rho = rho_from_theta(p.geometry, M_PI / 2.0);
        CHECK(rho == doctest::Approx(2.0));
        const auto v = sample_potential(p, {rho});
        CHECK(v[0] == doctest::Approx(4.0 * 0.7));
    }
    SUBCASE("rejects nonpositive rho") {
        CHECK_THROWS_AS(sample_potential(ring_params(1.0, 1.0, 1.0), {0.0}),
                        std::invalid_argument);
        CHECK_THROWS_AS(sample_potential(ring_params(1.0, 1.0, 1.0), {-2.0}),
                        std::invalid_argument);
    }
    SUBCASE("nonnegative with a unique minimum at rho0") {
        const auto p = ring_params(3.0, 0.2, 5.0);
        const auto s = derive_confinement(p.confinement, p.geometry);
        std::vector<double> grid;
        for (int i = 0; i <= 4000; ++i)
            grid.push_back(s.rho0 * std::pow(10.0, -2.0 + 4.0 * i / 4000.0));
        const auto v = sample_potential(p, grid);
        double best = 1e300;
        std::size_t best_i = 0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            CHECK(v[i] > -1e-12);
            if (v[i] < best) {
                best = v[i];
                best_i = i;
            }
        }
        // argmin within grid resolution of rho0
        const double step = grid[best_i + 1] / grid[best_i];
        CHECK(grid[best_i] / s.rho0 > 1.0 / (step * step));
        CHECK(grid[best_i] / s.rho0 < step * step);
    }
}

TEST_CASE("coordinate maps") {
    const Geometry g{1.0, false};
    CHECK(rho_from_theta(g, M_PI / 2.0) == doctest::Approx(2.0));
    CHECK(x_from_rho(g, 2.0) == doctest::Approx(0.5));
    CHECK(x_from_rho(g, 0.0) == 1.0);
    CHECK(x_from_theta(0.0) == 1.0);
    CHECK(x_from_theta(M_PI / 2.0) == doctest::Approx(0.5));

    SUBCASE("out-of-range rejection") {
        CHECK_THROWS_AS(rho_from_theta(g, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(rho_from_theta(g, M_PI), std::invalid_argument);
        CHECK_THROWS_AS(rho_from_x(g, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(rho_from_x(g, 1.5), std::invalid_argument);
        CHECK_THROWS_AS(theta_from_rho(g, -1.0), std::invalid_argument);
    }

    SUBCASE("round trips") {
        const Geometry g7{7.0, false};
        std::mt19937 rng(424242);
        std::uniform_real_distribution<double> logdist(-3.0, 3.0);
        for (int i = 0; i < 100; ++i) {
            const double rho = std::pow(10.0, logdist(rng));
            const double back = rho_from_x(g7, x_from_rho(g7, rho));
            // near the pole the ulp of x is amplified by (2a/rho)^2
            const double tol = 1e-15 * (rho + 4.0 * g7.a * g7.a / rho);
            CHECK(std::abs(back - rho) < tol);
            const double back2 = rho_from_theta(g7, theta_from_rho(g7, rho));
            CHECK(back2 == doctest::Approx(rho).epsilon(1e-12));
            CHECK(x_from_theta(theta_from_rho(g7, rho)) ==
                  doctest::Approx(x_from_rho(g7, rho)).epsilon(1e-13));
        }
    }
}

TEST_CASE("derive_state_quantities") {
    SUBCASE("M reduces to |m+nu| without lambda2") {
        const auto d = derive_state_quantities(ring_params(1.0, 0.4, 0.0), {0, 3});
        CHECK(d.M == 3.0);
    }
    SUBCASE("M reduces to sqrt(2*lambda2) when m+nu = 0") {
        const auto d =
            derive_state_quantities(ring_params(2.0, 1.0, 3.0, 0.0, 1.0), {0, -1});
        CHECK(d.M == doctest::Approx(std::sqrt(6.0)));
    }
    SUBCASE("flat-limit M and the a->infinity cross-check") {
        const auto df = derive_state_quantities(flat_params(1.0, 1.0), {0, 0});
        CHECK(df.M == doctest::Approx(std::sqrt(2.0)));
        const auto ds =
            derive_state_quantities(ring_params(1e6, 1.0, 1.0), {0, 0});
        CHECK(std::abs(ds.M - df.M) < 1e-10);
    }
    SUBCASE("omega_c follows B and omega_m is the quadrature sum") {
        const auto d = derive_state_quantities(ring_params(2.0, 1.0, 1.0, -3.0), {0, 1});
        CHECK(d.omega_c == -3.0);
        const double drift = -3.0 + 1.0 / 8.0;
        CHECK(d.omega_m == doctest::Approx(std::hypot(drift, d.omega0)));
        CHECK(d.rho_m == doctest::Approx(std::sqrt(2.0 * d.M / d.omega_m)));
    }
    SUBCASE("integer flux shift leaves M and omega_m bitwise unchanged") {
        // dyadic nu so m+nu is exactly representable across the shift
        for (int k : {-3, -1, 1, 2, 5}) {
            const auto d0 =
                derive_state_quantities(ring_params(5.0, 1.0, 2.0, 0.7, 0.375), {1, 2});
            const auto dk = derive_state_quantities(
                ring_params(5.0, 1.0, 2.0, 0.7, 0.375 - k), {1, 2 + k});
            CHECK(d0.M == dk.M);
            CHECK(d0.omega_m == dk.omega_m);
        }
    }
    SUBCASE("omega_m >= omega0 >= 0") {
        std::mt19937 rng(99);
        std::uniform_real_distribution<double> u(0.0, 4.0);
        std::uniform_int_distribution<int> mi(-6, 6);
        for (int i = 0; i < 200; ++i) {
            const auto p =
                ring_params(0.5 + u(rng), u(rng), u(rng), u(rng) - 2.0, u(rng) - 2.0);
            const auto d = derive_state_quantities(p, {0, mi(rng)});
            CHECK(d.omega0 >= 0.0);
            CHECK(d.omega_m >= d.omega0);
        }
    }
    SUBCASE("degenerate omega_m") {
        // lambda = 0 and omega_c = -(m+nu)/(2a^2) kills omega_m exactly
        const auto p = ring_params(1.0, 0.0, 0.0, -1.0, 0.0);
        CHECK_THROWS_AS(require_rho_m(p, {0, 2}), degenerate_frequency_error);
        const auto d = derive_state_quantities(p, {0, 2});
        CHECK(d.omega_m == 0.0);
        CHECK(d.rho_m == 0.0);
    }
}

TEST_CASE("spherical scales converge to flat forms") {
    const Confinement c{0.8, 2.5};
    const auto flat = derive_confinement(c, {0.0, true});
    const auto pf = flat_params(0.8, 2.5);
    const auto mf = derive_state_quantities(pf, {0, 1});

    double prev_err = 1e300;
    for (double a : {1e3, 1e4, 1e6}) {
        const auto s = derive_confinement(c, {a, false});
        const auto ms = derive_state_quantities(ring_params(a, 0.8, 2.5), {0, 1});
        const double err = std::abs(s.omega0 - flat.omega0) +
                           std::abs(s.rho0 - flat.rho0) +
                           std::abs(s.v0 - flat.v0) + std::abs(ms.M - mf.M);
        CHECK(err < prev_err);
        prev_err = err;
    }
    CHECK(prev_err < 1e-10);
}
