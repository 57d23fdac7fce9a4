#pragma once

#include <functional>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "plate/greens_solver.hpp"
#include "plate/quadrature.hpp"

namespace plate::test {

// Exact flow of phi'''' = 2 m^2 phi'' - (m^4 - lambda rho) phi on the state
// (phi, phi', phi'', phi''') over a distance t, via the matrix exponential.
Eigen::Matrix4d flow(double lambda, int m, double rho, double t);

// Determinant of the 4x4 matching system at y = z between the even inner
// solutions (density alpha) and the outer solutions (density beta) that meet
// the free-edge conditions at y = ell. Zero exactly at even eigenvalues.
double matching_det(double lambda, int m, double sigma, double ell, double alpha, double beta, double z);

// Smallest root of f in (lo, hi): uniform scan for a sign change, then bisection.
double first_root(const std::function<double(double)>& f, double lo, double hi, int samples,
                  double rel_tol = 1e-15);

// First even eigenvalue of the stripe (or unweighted when alpha = beta = 1)
// problem from matching_det; the mass-normalized interface is used.
double oracle_first_even(int m, double sigma, double ell, double alpha, double beta);

// Solution of L_m w = 1 with free edges: 1/m^4 + a cosh(my) + b y sinh(my).
struct ConstantForcingSolution {
    double a = 0.0, b = 0.0;
    int m = 0;
    double operator()(double y) const;
};
ConstantForcingSolution constant_forcing_solution(int m, double sigma, double ell);

// Positive root of tanh(u) = k u by Newton from u = 1/k.
double tanh_root(double k);

// Cell-averaged strong-form residual of L_m w = f, relative to max |f|.
double strong_residual(const LmSolution& sol, const SampledFunction& f, int m);

// Nonnegative continuous piecewise-linear function on [-1, 1].
struct PiecewiseLinear {
    std::vector<double> knots;
    std::vector<double> values;
    double operator()(double s) const;
};
PiecewiseLinear random_nonnegative_pl(std::mt19937_64& rng);

}  // namespace plate::test
