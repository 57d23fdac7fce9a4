#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "plate/plate_core.hpp"

namespace plate {

// How a first even eigenvalue is obtained for a given weight.
enum class Route { unweighted, stripe, inverse_power };
const char* to_string(Route r);

struct SolverOptions {
    double tol = 1e-13;
    std::size_t green_cells = 4096;
    bool force_inverse_power = false;
};

// lambda-bar_1(p, m): unweighted closed form, stripe secular solver, or
// inverse power on L_m, whichever applies to p.
double first_even(const EvenPiecewiseWeight& p, int m, const PlateParams& params,
                  const SolverOptions& opts = {}, Route* route = nullptr);

struct PlateEigenResult {
    double lambda = 0.0;
    int argmin_m = 0;
    std::vector<double> per_m;  // index m - 1
    Route route = Route::inverse_power;
    bool argmin_is_one = false;
    // FE cross-check at the minimizing m; NaN when skipped
    double fe_lambda = 0.0;
    double fe_relative_gap = 0.0;
};

PlateEigenResult plate_first_eigenvalue(const EvenPiecewiseWeight& p, const PlateParams& params,
                                        int m_max = 10, const SolverOptions& opts = {},
                                        bool fe_confirm = true);

// beta < min(1/mu_{1,1}, 16 (1 - sigma^2))
double proven_beta_limit(const PlateParams& params);
bool in_proven_regime(double beta, const PlateParams& params);

// Weight depending on x only: a profile in the distance from the nearer edge
// x = 0 or x = pi, given on [0, pi/2].
struct XWeight {
    EvenPiecewiseWeight profile;
    double operator()(double x) const;
};

// Weight varying in one direction only.
struct DirectionalWeight {
    enum class Axis { y, x };
    Axis axis = Axis::y;
    EvenPiecewiseWeight profile;

    static DirectionalWeight along_y(EvenPiecewiseWeight p) { return {Axis::y, std::move(p)}; }
    static DirectionalWeight along_x(EvenPiecewiseWeight p) { return {Axis::x, std::move(p)}; }
};

// Stripe of the form alpha near the edges x = 0, pi and beta on the central block.
EvenPiecewiseWeight x_stripe_profile(double alpha, double beta);

struct RayleighBound {
    double bound = 0.0;
    double mu11 = 0.0;
    bool ok = false;
};
// ||u1||^2_{H^2_*} / ||sqrt(p) u1||^2 with u1(x, y) = phi(y) sin x the unweighted
// first mode. Throws HypothesisViolation when p is outside the admissible class.
RayleighBound rayleigh_bound_u1(const DirectionalWeight& p, const PlateParams& params,
                                std::size_t nx = 512, std::size_t ny = 512);

struct MonotonicityVerdict {
    double lambda1 = 0.0;  // lambda_1(p1)
    double lambda2 = 0.0;  // lambda_1(p2)
    bool verdict = false;
    bool guaranteed = false;  // beta inside the proven regime
};
// Nested comparison: p1 <= p2 up to some z, p1 >= p2 after it.
MonotonicityVerdict pattern_monotonicity_check(const EvenPiecewiseWeight& p1,
                                               const EvenPiecewiseWeight& p2,
                                               const PlateParams& params, int m_max = 10,
                                               double tol = 1e-12);

// One random draw from the single-crossing mass-normalized class; nullopt when
// the solved last level falls outside [1, beta].
std::optional<EvenPiecewiseWeight> sample_class_weight(double alpha, double beta, double ell,
                                                       std::mt19937_64& rng);

struct ClassMinimumReport {
    double alpha = 0.0, beta = 0.0;
    double lambda_bar = 0.0;          // lambda_1 of the optimal stripe (stripe solver)
    double lambda_bar_green = 0.0;    // same weight by inverse power
    std::vector<double> margins;      // lambda_1(p) / lambda_bar - 1
    std::size_t violations = 0;
    std::size_t rejected_draws = 0;
    bool guaranteed = false;
    double min_margin = 0.0;
};
ClassMinimumReport verify_class_minimum(double alpha, double beta, const PlateParams& params,
                                        std::size_t n_samples, std::uint64_t seed,
                                        double rel_tol = 1e-9, int m_max = 3);

// (1 - t) a + t b on the union of both breakpoint sets
EvenPiecewiseWeight blend_weights(const EvenPiecewiseWeight& a, const EvenPiecewiseWeight& b,
                                  double t);

struct NestedPair {
    double t = 0.0;
    MonotonicityVerdict verdict;
};
struct NestedPairReport {
    std::vector<NestedPair> pairs;
    std::size_t violations = 0;
    std::size_t rejected_draws = 0;
    bool guaranteed = false;
};
// p2 drawn from the class, p1 = p2 + t (pbar - p2) with t uniform in (0.1, 0.9), so
// p1 - p2 is <= 0 before the optimal interface and >= 0 after it. Draws whose
// blend leaves the single-crossing class are rejected.
NestedPairReport verify_nested_pairs(double alpha, double beta, const PlateParams& params,
                                     std::size_t n_pairs, std::uint64_t seed, double rel_tol = 1e-9,
                                     int m_max = 3);

struct SweepResult {
    std::string axis;
    std::vector<double> points;
    std::vector<double> lambdas;
    bool monotone = false;  // strictly decreasing for beta, increasing for m
    std::vector<std::string> violations;
};
SweepResult sweep_beta(int m, double alpha, const std::vector<double>& betas,
                       const PlateParams& params);
SweepResult sweep_m(const TwoMaterialWeight& w, int m_max, const PlateParams& params);

struct Table1 {
    std::vector<std::string> labels;   // one per weight row
    std::vector<TwoMaterialWeight> weights;
    std::vector<std::vector<double>> lambda;     // [row][m - 1]
    std::vector<std::vector<double>> fe_lambda;  // FE oracle, same shape
};
Table1 table1(const PlateParams& params, int m_max = 10, bool fe_check = true);

struct SublevelReport {
    double threshold = 0.0;
    double target_fraction = 0.0;
    double fraction = 0.0;
    std::size_t nx = 0, ny = 0;
    std::vector<std::uint8_t> mask;  // row-major [iy * nx + ix], 1 inside S
    double sym_diff_fraction = 0.0;  // vs best equal-area union of rows
    bool differs = false;            // sym-diff > 1% of |Omega|
};
// u^2 sampled at cell centres, row-major [iy * nx + ix]
SublevelReport sublevel_analysis(const std::vector<double>& u2, std::size_t nx, std::size_t ny,
                                 double target_fraction);
SublevelReport sublevel_report(const TwoMaterialWeight& w, const PlateParams& params,
                               std::size_t nx = 256, std::size_t ny = 256,
                               std::optional<double> fraction = std::nullopt);

}  // namespace plate
