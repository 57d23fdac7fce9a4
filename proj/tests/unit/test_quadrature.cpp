#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "plate/errors.hpp"
#include "plate/quadrature.hpp"

using namespace plate;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("simpson integrates cubics exactly for even and odd panel counts")
{
    auto cubic = [](double x) { return 2 * x * x * x - x * x + 3 * x - 1; };
    auto prim = [](double x) { return 0.5 * x * x * x * x - x * x * x / 3 + 1.5 * x * x - x; };
    for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 10u, 11u}) {
        const double a = -0.3, b = 1.7, h = (b - a) / n;
        std::vector<double> g(n + 1);
        for (std::size_t i = 0; i <= n; ++i) g[i] = cubic(a + i * h);
        const double exact = prim(b) - prim(a);
        if (n == 1) continue;  // trapezoid
        CHECK_THAT(simpson(g, h), WithinRel(exact, 1e-13));
    }
}

TEST_CASE("cumulative simpson agrees with prefix integrals")
{
    const std::size_t n = 37;
    const double h = 0.05;
    std::vector<double> g(n + 1), out(n + 1);
    for (std::size_t i = 0; i <= n; ++i) g[i] = std::exp(0.7 * i * h);
    cumulative_simpson(g, h, out);
    for (std::size_t j = 1; j <= n; ++j) {
        const double exact = (std::exp(0.7 * j * h) - 1) / 0.7;
        // the first cell uses a three-point rule, one order lower
        CHECK_THAT(out[j], WithinRel(exact, j == 1 ? 3e-6 : 1e-7));
    }
}

TEST_CASE("aligned grids put nodes on breakpoints with even cell counts")
{
    const std::vector<double> bps{-1.0, -0.25, 0.1, 1.0};
    const Grid g = Grid::aligned(bps, 100);
    REQUIRE(g.segments().size() == 3);
    for (std::size_t s = 0; s < 3; ++s) {
        const auto& seg = g.segments()[s];
        CHECK(g.nodes()[seg.first] == bps[s]);
        CHECK(g.nodes()[seg.last] == bps[s + 1]);
        CHECK((seg.last - seg.first) % 2 == 0);
        CHECK(seg.last - seg.first >= 2);
    }
    const Grid m = Grid::mirrored(std::vector<double>{0.0, 0.3, 1.0}, 64);
    for (std::size_t i = 0; i < m.size(); ++i) CHECK_THAT(m.nodes()[i], WithinAbs(-m.nodes()[m.size() - 1 - i], 1e-15));
}

TEST_CASE("from_nodes insists on uniform spacing")
{
    CHECK_NOTHROW(Grid::from_nodes({0.0, 0.5, 1.0}));
    CHECK_THROWS_AS(Grid::from_nodes({0.0, 0.4, 1.0}), InvalidArgument);
}

TEST_CASE("sampled step functions keep one-sided limits and integrate exactly")
{
    const Grid g = Grid::aligned(std::vector<double>{-1.0, 0.2, 1.0}, 40);
    const auto f = SampledFunction::from_function(g, [](double y) { return y < 0.2 ? 2.0 : 5.0; });
    const std::size_t k = g.segments()[0].last;
    CHECK(f.left()[k] == 2.0);
    CHECK(f.right()[k] == 5.0);
    CHECK_THAT(f.integral(), WithinRel(2.0 * 1.2 + 5.0 * 0.8, 1e-14));
    CHECK(f.max_abs() == 5.0);
    CHECK_THAT((f * f).integral(), WithinRel(4.0 * 1.2 + 25.0 * 0.8, 1e-14));
}
