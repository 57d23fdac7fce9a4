#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "plate/errors.hpp"
#include "plate/quadrature.hpp"
#include "plate/stripe_spectrum.hpp"
#include "support/oracles.hpp"

using namespace plate;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

double m4(int m) { return std::pow(double(m), 4); }

const double thin = std::numbers::pi / 150;

}  // namespace

TEST_CASE("unweighted mu_{m,1} matches the matrix-exponential matching oracle")
{
    for (double ell : {thin, 0.5}) {
        const auto p = make_plate(ell, 0.2);
        for (int m : {1, 2, 3, 5, 10}) {
            const double mu = unweighted_first(m, p).lambda;
            CHECK_THAT(mu, WithinRel(test::oracle_first_even(m, 0.2, ell, 1.0, 1.0), 1e-9));
            CHECK(mu > (1 - 0.04) * m4(m));
            CHECK(mu < m4(m));
        }
    }
}

TEST_CASE("stripe first even eigenvalue matches the oracle")
{
    for (double ell : {thin, 0.5}) {
        const auto p = make_plate(ell, 0.2);
        for (auto [a, b] : {std::pair{0.5, 1.5}, {0.5, 20.0}, {0.96, 1.04}, {0.9, 1.04}}) {
            const auto w = TwoMaterialWeight::mass_normalized(a, b, ell);
            for (int m : {1, 2, 5}) {
                const auto sp = first_even_eigenvalue(m, p, w);
                INFO("ell=" << ell << " alpha=" << a << " beta=" << b << " m=" << m);
                CHECK_THAT(sp.lambda, WithinRel(test::oracle_first_even(m, 0.2, ell, a, b), 1e-9));
                CHECK(sp.case_tag == classify_case(sp.lambda, m, w));
            }
        }
    }
}

TEST_CASE("case classification follows m^4/beta and m^4/alpha")
{
    const auto w = TwoMaterialWeight::mass_normalized(0.5, 2.0, 1.0);
    CHECK(classify_case(0.3, 1, w) == CaseTag::a);
    CHECK(classify_case(0.5, 1, w) == CaseTag::b);
    CHECK(classify_case(1.0, 1, w) == CaseTag::c);
    CHECK(classify_case(2.0, 1, w) == CaseTag::d);
    CHECK(classify_case(3.0, 1, w) == CaseTag::e);
    CHECK_THROWS_AS(secular_matrix(0.5, 1, make_plate(1.0), w), DegenerateCase);
}

TEST_CASE("raw secular entry is (eta_beta^2 - sigma m^2) cosh(eta_beta ell)")
{
    const auto p = make_plate(0.5, 0.2);
    const auto w = TwoMaterialWeight::mass_normalized(0.5, 1.5, 0.5);
    const double lambda = 0.4;
    const int m = 1;
    const auto M = secular_matrix(lambda, m, p, w, RowScaling::none);
    const double eta2 = m * m + std::sqrt(lambda * 1.5);
    CHECK_THAT(M(0, 0), WithinRel((eta2 - 0.2) * std::cosh(std::sqrt(eta2) * 0.5), 1e-13));
}

TEST_CASE("row scaling never changes the determinant sign")
{
    const auto p = make_plate(0.5, 0.2);
    const auto w = TwoMaterialWeight::mass_normalized(0.5, 1.5, 0.5);
    for (double lambda : {0.1, 0.3, 0.6, 0.9, 1.3, 1.9, 5.0, 40.0}) {
        const double a = secular_det(lambda, 1, p, w, RowScaling::none);
        const double b = secular_det(lambda, 1, p, w, RowScaling::unit_max);
        CHECK((a > 0) == (b > 0));
    }
}

TEST_CASE("mode from the null vector solves the problem")
{
    const double ell = 0.5;
    const auto p = make_plate(ell, 0.2);
    const auto w = TwoMaterialWeight::mass_normalized(0.5, 1.5, ell);
    const int m = 2;
    const auto sp = first_even_eigenvalue(m, p, w);
    const auto v = secular_null_vector(sp.lambda, m, p, w);
    const auto M = secular_matrix(sp.lambda, m, p, w);
    Eigen::Matrix<double, 6, 1> x;
    for (int i = 0; i < 6; ++i) x(i) = v[i];
    CHECK((M * x).norm() <= 1e-9 * x.norm());

    const auto phi = mode_function(sp, p, w);
    CHECK(phi(0.0) > 0);
    const double mm = m * m;
    // free edges
    const double s = 1.0 + std::abs(phi(ell)) * mm;
    CHECK_THAT(phi.derivative(ell, 2) - 0.2 * mm * phi(ell), WithinAbs(0.0, 1e-9 * s));
    CHECK_THAT(phi.derivative(ell, 3) - 1.8 * mm * phi.derivative(ell, 1), WithinAbs(0.0, 1e-9 * s * mm));
    // C^3 across the interface
    for (int k = 0; k < 4; ++k)
        CHECK_THAT(phi.derivative(w.z() - 1e-12, k), WithinAbs(phi.derivative(w.z() + 1e-12, k), 1e-7 * s * 10));
    // ODE residual from differences of the third derivative
    for (double y : {0.05, 0.2, 0.4}) {
        const double h = 1e-4;
        const double d4 = (phi.derivative(y + h, 3) - phi.derivative(y - h, 3)) / (2 * h);
        const double r = d4 - 2 * mm * phi.derivative(y, 2) + mm * mm * phi(y) - sp.lambda * w(y) * phi(y);
        CHECK(std::abs(r) <= 1e-5 * (mm * mm * std::abs(phi(y))));
    }
    // normalization, checked with independent trapezoid sums on each material piece
    double total = 0;
    const double cuts[4] = {-ell, -w.z(), w.z(), ell};
    for (int piece = 0; piece < 3; ++piece) {
        const double a = cuts[piece], b = cuts[piece + 1], rho = piece == 1 ? w.alpha() : w.beta();
        const int n = 100000;
        double acc = 0;
        for (int i = 0; i <= n; ++i) {
            const double v = phi(a + (b - a) * i / n);
            acc += (i == 0 || i == n) ? 0.5 * v * v : v * v;
        }
        total += rho * acc * (b - a) / n;
    }
    CHECK_THAT(total, WithinRel(1.0, 1e-8));
}

TEST_CASE("spectrum listing is ascending and starts at the first eigenvalue")
{
    const auto p = make_plate(1.5, 0.2);
    const auto w = TwoMaterialWeight::mass_normalized(0.5, 1.5, 1.5);
    const auto first = first_even_eigenvalue(1, p, w);
    const auto all = even_eigenvalues_below(1, p, w, 120.0);
    REQUIRE(all.size() >= 2);
    CHECK_THAT(all.front().lambda, WithinRel(first.lambda, 1e-12));
    for (std::size_t i = 1; i < all.size(); ++i) CHECK(all[i].lambda > all[i - 1].lambda);
    // same count of sign changes from the oracle determinant
    const double z = w.z();
    int changes = 0;
    double prev = test::matching_det(1e-6, 1, 0.2, 1.5, 0.5, 1.5, z);
    for (int i = 1; i <= 40000; ++i) {
        const double l = 120.0 * i / 40000;
        const double cur = test::matching_det(l, 1, 0.2, 1.5, 0.5, 1.5, z);
        if ((cur < 0) != (prev < 0)) ++changes;
        prev = cur;
    }
    CHECK(static_cast<int>(all.size()) == changes);
}

TEST_CASE("unweighted determinant changes sign across mu")
{
    const auto p = make_plate(thin, 0.2);
    const double mu = unweighted_first(1, p).lambda;
    CHECK((unweighted_det(mu * (1 - 1e-9), 1, p) > 0) != (unweighted_det(mu * (1 + 1e-9), 1, p) > 0));
    const auto phi = unweighted_mode(1, p);
    CHECK(phi(0) > 0);
    CHECK(phi(thin) > phi(0));
}
