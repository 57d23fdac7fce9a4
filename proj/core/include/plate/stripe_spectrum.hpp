#pragma once

#include <vector>

#include <Eigen/Core>

#include "plate/mode_function.hpp"
#include "plate/plate_core.hpp"

namespace plate {

// |lambda beta - m^4| <= tol m^4 gives case b, same with alpha gives d.
CaseTag classify_case(double lambda, int m, const TwoMaterialWeight& w, double tol = 1e-9);

// eta_i = sqrt(m^2 + sqrt(lambda i)), omega_i = sqrt|m^2 - sqrt(lambda i)|
struct BranchRoots {
    double eta_alpha = 0.0;
    double eta_beta = 0.0;
    double omega_alpha = 0.0;
    double omega_beta = 0.0;
    CaseTag case_tag = CaseTag::c;
};
BranchRoots branch_roots(double lambda, int m, const TwoMaterialWeight& w);

enum class RowScaling { none, unit_max };

// Rows: the two free-edge conditions at y = ell, then continuity of the value
// and first three derivatives at y = z. Columns as documented on SpectralPoint.
// With RowScaling::none no column rescaling is applied either.
Eigen::Matrix<double, 6, 6> secular_matrix(double lambda, int m, const PlateParams& params,
                                           const TwoMaterialWeight& w,
                                           RowScaling scaling = RowScaling::unit_max);
double secular_det(double lambda, int m, const PlateParams& params, const TwoMaterialWeight& w,
                   RowScaling scaling = RowScaling::unit_max);

struct ScanOptions {
    int points_per_case = 2000;
    double rel_tol = 1e-13;
    // scan windows stay this far (relative) from m^4/beta and m^4/alpha
    double band = 1e-8;
    // upper end of the case (e) window, as a multiple of m^4/alpha
    double case_e_factor = 64.0;
};

// Smallest even eigenvalue of the stripe problem. Scans case (a), then (c),
// then (e) for a sign change of the scaled determinant and bisects it.
SpectralPoint first_even_eigenvalue(int m, const PlateParams& params, const TwoMaterialWeight& w,
                                    const ScanOptions& opts = {});

// All even eigenvalues below lambda_max, ascending.
std::vector<SpectralPoint> even_eigenvalues_below(int m, const PlateParams& params,
                                                  const TwoMaterialWeight& w, double lambda_max,
                                                  const ScanOptions& opts = {});

// Null vector of the secular matrix at sp.lambda; throws NonSimpleRoot when the
// kernel is not one-dimensional.
std::array<double, 6> secular_null_vector(double lambda, int m, const PlateParams& params,
                                          const TwoMaterialWeight& w);

// Closed-form profile normalized to integral of p phi^2 = 1 over (-ell, ell), phi(0) > 0.
ModeFunction mode_function(const SpectralPoint& sp, const PlateParams& params,
                           const TwoMaterialWeight& w);

// First even eigenvalue mu_{m,1} of the unweighted problem, in ((1-sigma^2) m^4, m^4).
SpectralPoint unweighted_first(int m, const PlateParams& params, double rel_tol = 1e-14);
// 2x2 determinant whose zero is mu_{m,1}
double unweighted_det(double mu, int m, const PlateParams& params);
// normalized to integral of phi^2 = 1
ModeFunction unweighted_mode(int m, const PlateParams& params);

}  // namespace plate
