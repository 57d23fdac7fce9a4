#pragma once

#include <vector>

#include "plate/mode_function.hpp"
#include "plate/plate_core.hpp"
#include "plate/quadrature.hpp"

namespace plate {

// Fundamental solution of L_m on the line: (1 + m|y|) exp(-m|y|) / (4 m^3)
double kernel_qm(int m, double y, int derivative = 0);

// Convolution of q_m^{(k)} with f, k = 0..3, at every grid node.
struct ParticularSolution {
    Grid grid;
    std::array<std::vector<double>, 4> derivs;
};
ParticularSolution particular_solution(const SampledFunction& f, int m, const PlateParams& params);

// V = sigma m^2 w_p - w_p'', W = w_p''' - (2 - sigma) m^2 w_p' at +-ell, from the
// single-integral representations
struct BoundaryData {
    double V_plus = 0.0;
    double V_minus = 0.0;
    double W_plus = 0.0;
    double W_minus = 0.0;
};
BoundaryData boundary_data(const SampledFunction& f, int m, const PlateParams& params);

struct EdgeFunctions {
    double F = 0.0, Fbar = 0.0;
    double A = 0.0, B = 0.0, Abar = 0.0, Bbar = 0.0;
};
EdgeFunctions edge_functions(int m, const PlateParams& params);

// w_h = c1 cosh(my) + c2 sinh(my) + c3 y cosh(my) + c4 y sinh(my)
struct HomogeneousCoeffs {
    double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0;
};
HomogeneousCoeffs homogeneous_coefficients(const BoundaryData& data, int m,
                                           const PlateParams& params);
double homogeneous_part(const HomogeneousCoeffs& c, int m, double y, int derivative = 0);

struct LmSolution {
    ModeFunction w;
    HomogeneousCoeffs coeffs;
    BoundaryData boundary;
};
// Solves L_m w = f with free-edge conditions.
LmSolution solve_Lm(const SampledFunction& f, int m, const PlateParams& params);

struct PppResult {
    double min_w = 0.0;
    bool positive = false;
    HomogeneousCoeffs coeffs;
    // zeros of the homogeneous part on [-10 ell - 10/m, 10 ell + 10/m]
    int homogeneous_zeros = 0;
};
PppResult ppp_check(const SampledFunction& f, int m, const PlateParams& params);

// Sign-lemma maps of z = m ell.
double g_map(double z, double sigma);
double p_map(double z, double sigma);
double q_map(double z, double sigma);
double r_map(double z, double sigma);
double s_map(double z, double sigma);

// C_m, D_m, Cbar_m, Dbar_m; `stable` divides the maps by F Fbar, otherwise the
// defining differences are evaluated directly (fine for small z only).
struct EdgeCoefficients {
    double C = 0.0, D = 0.0, Cbar = 0.0, Dbar = 0.0;
};
EdgeCoefficients edge_coefficients(double z, double sigma, bool stable = true);

struct SignLemmaRow {
    double sigma = 0.0;
    double z = 0.0;
    double g = 0.0, p = 0.0, q = 0.0, r = 0.0, s = 0.0;
    double C = 0.0, D = 0.0, Cbar = 0.0, Dbar = 0.0;
    double F = 0.0, Fbar = 0.0;
    double edge_gap = 0.0;  // 2 cosh z - (1 + sigma) sinh z, scaled by exp(-z)
    bool positive = false;
};
struct SignLemmaReport {
    std::vector<SignLemmaRow> rows;
    std::size_t violations = 0;
};
SignLemmaReport sign_lemma_report(const std::vector<double>& sigmas, double z_max,
                                  std::size_t points);

struct GreenOptions {
    std::size_t cells = 4096;
    int max_iter = 10000;
};

struct InversePowerResult {
    double lambda = 0.0;
    int iterations = 0;
    ModeFunction phi;
};
// phi_{k+1} = solve_Lm(p phi_k) normalized in L2(p), lambda from the weak form.
InversePowerResult inverse_power_first(const EvenPiecewiseWeight& p, int m,
                                       const PlateParams& params, double tol = 1e-13,
                                       const GreenOptions& opts = {});

}  // namespace plate
