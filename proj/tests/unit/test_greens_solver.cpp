#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "plate/errors.hpp"
#include "plate/greens_solver.hpp"
#include "plate/optimizer.hpp"
#include "plate/quadrature.hpp"
#include "plate/stripe_spectrum.hpp"
#include "support/oracles.hpp"

using namespace plate;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("kernel is the free-space fundamental solution")
{
    for (int m : {1, 3}) {
        const double mm = m * m;
        // (1 + m|t|) e^{-m|t|} / (4 m^3)
        for (double t : {-0.7, -0.1, 0.2, 1.1}) {
            const double at = std::abs(t);
            CHECK_THAT(kernel_qm(m, t), WithinRel((1 + m * at) * std::exp(-m * at) / (4 * mm * m), 1e-14));
            const double h = 1e-3;
            const double d4 = (kernel_qm(m, t + h, 3) - kernel_qm(m, t - h, 3)) / (2 * h);
            const double r = d4 - 2 * mm * kernel_qm(m, t, 2) + mm * mm * kernel_qm(m, t);
            CHECK(std::abs(r) < 1e-5);
        }
        // unit jump of the third derivative at the origin
        CHECK_THAT(kernel_qm(m, 1e-14, 3) - kernel_qm(m, -1e-14, 3), WithinRel(1.0, 1e-10));
    }
}

TEST_CASE("particular solution of f = 1 at the centre has a closed form")
{
    for (double ell : {std::numbers::pi / 150, 0.5, 2.0}) {
        const auto p = make_plate(ell, 0.2);
        const auto f = SampledFunction::from_function(Grid::uniform(-ell, ell, 4096), [](double) { return 1.0; });
        for (int m : {1, 4}) {
            const auto wp = particular_solution(f, m, p);
            const std::size_t mid = wp.grid.size() / 2;
            const double ml = m * ell;
            const double exact = 2 * (2 - (2 + ml) * std::exp(-ml)) / (4 * std::pow(double(m), 4));
            CHECK_THAT(wp.derivs[0][mid], WithinRel(exact, 1e-10));
        }
    }
}

TEST_CASE("solve_Lm reproduces the constant-forcing solution")
{
    for (double ell : {std::numbers::pi / 150, 0.5}) {
        const auto p = make_plate(ell, 0.2);
        const auto f = SampledFunction::from_function(Grid::uniform(-ell, ell, 1024), [](double) { return 1.0; });
        for (int m : {1, 2, 7}) {
            const auto sol = solve_Lm(f, m, p);
            const auto exact = test::constant_forcing_solution(m, 0.2, ell);
            for (double y : {-ell, -0.3 * ell, 0.0, 0.77 * ell, ell})
                CHECK_THAT(sol.w(y), WithinRel(exact(y), 1e-9));
        }
    }
}

TEST_CASE("edge data of a narrow bump approaches the point-load value")
{
    const double ell = 1.0, s0 = 0.3, delta = 1e-3, sigma = 0.2;
    const auto p = make_plate(ell, sigma);
    const std::vector<double> bps{-ell, s0 - delta, s0, s0 + delta, ell};
    // unit-mass tent
    const auto f = SampledFunction::from_function(Grid::aligned(bps, 4000), [&](double y) {
        return std::max(0.0, 1 - std::abs(y - s0) / delta) / delta;
    });
    const int m = 2;
    const double t = ell - s0;
    // sigma m^2 q(t) - q''(t) with q'' = (t/4 - 1/(4m)) e^{-mt}
    const double v_exact = std::exp(-m * t) / (4 * m) * ((1 + sigma) - m * t * (1 - sigma));
    const auto bd = boundary_data(f, m, p);
    CHECK_THAT(bd.V_plus, WithinRel(v_exact, 1e-5));
    // same through the particular solution at the edge node
    const auto wp = particular_solution(f, m, p);
    const std::size_t last = wp.grid.size() - 1;
    CHECK_THAT(sigma * m * m * wp.derivs[0][last] - wp.derivs[2][last], WithinRel(bd.V_plus, 1e-9));
}

TEST_CASE("strong residual is small for random nonnegative forcing")
{
    std::mt19937_64 rng(7);
    for (int i = 0; i < 10; ++i) {
        const auto g = test::random_nonnegative_pl(rng);
        for (double ell : {std::numbers::pi / 150, 0.5}) {
            const auto p = make_plate(ell, 0.2);
            std::vector<double> bps;
            for (double k : g.knots) bps.push_back(k * ell);
            const auto f = SampledFunction::from_function(Grid::aligned(bps, 4096), [&](double y) { return g(y / ell); });
            const int m = 1 + i;
            const auto sol = solve_Lm(f, m, p);
            CHECK(test::strong_residual(sol, f, m) < 1e-4);
            const auto r = ppp_check(f, m, p);
            CHECK(r.positive);
            CHECK(r.min_w > 0);
            CHECK(r.coeffs.c1 > 0);
            CHECK(r.coeffs.c4 < 0);
            CHECK(std::abs(r.coeffs.c3) < std::abs(r.coeffs.c4));
            CHECK(r.homogeneous_zeros == 2);
        }
    }
}

TEST_CASE("ppp_check rejects negative or vanishing forcing")
{
    const auto p = make_plate(0.5, 0.2);
    const Grid g = Grid::uniform(-0.5, 0.5, 64);
    CHECK_THROWS_AS(ppp_check(SampledFunction::from_function(g, [](double y) { return y; }), 1, p), InvalidArgument);
    CHECK_THROWS_AS(ppp_check(SampledFunction::from_function(g, [](double) { return 0.0; }), 1, p), InvalidArgument);
}

TEST_CASE("homogeneous part derivatives agree with differences")
{
    const HomogeneousCoeffs c{0.3, -0.2, 0.1, -0.4};
    for (int k = 0; k < 3; ++k)
        for (double y : {-0.4, 0.1, 0.6}) {
            const double h = 1e-5;
            const double d = (homogeneous_part(c, 2, y + h, k) - homogeneous_part(c, 2, y - h, k)) / (2 * h);
            CHECK_THAT(homogeneous_part(c, 2, y, k + 1), WithinAbs(d, 1e-6));
        }
}

TEST_CASE("sign-lemma maps: stable and direct forms agree where both are accurate")
{
    for (double sigma : {0.05, 0.25, 0.45}) {
        CHECK(g_map(0.0, sigma) == 4.0);
        for (double z : {1e-2, 0.1, 0.5, 1.0, 3.0}) {
            const auto s = edge_coefficients(z, sigma, true);
            const auto d = edge_coefficients(z, sigma, false);
            CHECK_THAT(s.C, WithinRel(d.C, 1e-7));
            CHECK_THAT(s.D, WithinRel(d.D, 1e-7));
            CHECK_THAT(s.Cbar, WithinRel(d.Cbar, 1e-7));
            CHECK_THAT(s.Dbar, WithinRel(d.Dbar, 1e-7));
        }
    }
    const auto rep = sign_lemma_report({0.05, 0.15, 0.25, 0.35, 0.45}, 50.0, 600);
    CHECK(rep.violations == 0);
    CHECK(rep.rows.size() == 5 * 600);
    for (const auto& r : rep.rows) {
        CHECK(r.z > 0);
        CHECK(r.z <= 50.0);
    }
}

TEST_CASE("inverse power agrees with the oracle on stripes and three-level weights")
{
    for (double ell : {std::numbers::pi / 150, 0.5}) {
        const auto p = make_plate(ell, 0.2);
        for (auto [a, b] : {std::pair{1.0, 1.0}, {0.5, 1.5}, {0.5, 20.0}}) {
            const auto w = (a == 1.0) ? TwoMaterialWeight::unweighted(ell) : TwoMaterialWeight::mass_normalized(a, b, ell);
            for (int m : {1, 3}) {
                const auto r = inverse_power_first(w.to_piecewise(), m, p);
                CHECK_THAT(r.lambda, WithinRel(test::oracle_first_even(m, 0.2, ell, a, b), 1e-8));
                CHECK(r.phi(0) > 0);
            }
        }
    }
}
