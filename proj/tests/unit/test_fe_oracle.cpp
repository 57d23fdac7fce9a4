#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "plate/errors.hpp"
#include "plate/fe_oracle.hpp"
#include "plate/quadrature.hpp"
#include "support/oracles.hpp"

using namespace plate;
using Catch::Matchers::WithinRel;

TEST_CASE("cubic Hermite eigenvalues converge at fourth order")
{
    const auto p = make_plate(0.5, 0.2);
    const auto w = EvenPiecewiseWeight::constant(0.5);
    double lam[3];
    std::size_t ns[3] = {8, 16, 32};
    for (int i = 0; i < 3; ++i) lam[i] = smallest_eig(assemble_forms(w, 1, p, ns[i])).lambda;
    const double ratio = (lam[0] - lam[1]) / (lam[1] - lam[2]);
    CHECK(ratio > 14.0);
    CHECK(ratio < 18.0);
}

TEST_CASE("extrapolated FE matches the oracle")
{
    for (double ell : {std::numbers::pi / 150, 0.5}) {
        const auto p = make_plate(ell, 0.2);
        for (auto [a, b] : {std::pair{1.0, 1.0}, {0.5, 1.5}, {0.5, 20.0}}) {
            const auto w = (a == 1.0) ? TwoMaterialWeight::unweighted(ell) : TwoMaterialWeight::mass_normalized(a, b, ell);
            for (int m : {1, 5}) {
                const auto est = fd_first_eigen(w.to_piecewise(), m, p);
                CHECK_THAT(est.extrapolated, WithinRel(test::oracle_first_even(m, 0.2, ell, a, b), 1e-8));
            }
        }
    }
}

TEST_CASE("inertia counts and the second even eigenvalue")
{
    const auto p = make_plate(1.0, 0.2);
    const auto w = TwoMaterialWeight::mass_normalized(0.5, 1.5, 1.0).to_piecewise();
    const auto forms = assemble_forms(w, 1, p, 64);
    const auto e1 = smallest_eig(forms);
    const auto e2 = second_even_eig(forms, e1);
    CHECK(e2.lambda > e1.lambda);
    CHECK(count_even_eigenvalues_below(forms, e1.lambda * (1 - 1e-6)) == 0);
    CHECK(count_even_eigenvalues_below(forms, e1.lambda * (1 + 1e-6)) == 1);
    CHECK(count_even_eigenvalues_below(forms, e2.lambda * (1 + 1e-6)) == 2);
    CHECK_THAT(forms.rayleigh(e1.x), WithinRel(e1.lambda, 1e-12));
}

TEST_CASE("FE mode is normalized and even")
{
    const double ell = 0.5;
    const auto p = make_plate(ell, 0.2);
    const auto w = TwoMaterialWeight::mass_normalized(0.5, 20.0, ell).to_piecewise();
    const auto forms = assemble_forms(w, 2, p, 64);
    const auto phi = fe_mode(forms, smallest_eig(forms).x);
    const Grid g = Grid::mirrored(w.breakpoints(), 4000);
    const double norm = SampledFunction::from_function(g, [&](double y) { return w(y) * phi(y) * phi(y); }).integral();
    CHECK_THAT(norm, WithinRel(1.0, 1e-6));
    CHECK_THAT(phi(0.3), WithinRel(phi(-0.3), 1e-10));
    CHECK(phi(0.0) > 0);
}

TEST_CASE("odd element counts are rejected")
{
    const auto p = make_plate(0.5, 0.2);
    CHECK_THROWS_AS(assemble_forms(EvenPiecewiseWeight::constant(0.5), 1, p, 7), InvalidArgument);
}
