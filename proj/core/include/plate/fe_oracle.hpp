#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "plate/mode_function.hpp"
#include "plate/plate_core.hpp"

namespace plate {

// Cubic Hermite discretization of the weak form on a symmetric mesh whose
// element boundaries contain the weight breakpoints. Unknowns per node:
// value and slope.
struct DiscreteForms {
    Eigen::SparseMatrix<double> K;
    Eigen::SparseMatrix<double> M;
    std::vector<double> nodes;
    std::vector<double> density;  // weight on each element
    int m = 0;
    PlateParams params;

    // Element-by-element evaluation; avoids the cancellation hidden in x^T K x
    // when m^4 h is tiny next to 12 / h^3.
    double energy(const Eigen::VectorXd& x) const;
    double mass(const Eigen::VectorXd& x) const;
    double rayleigh(const Eigen::VectorXd& x) const { return energy(x) / mass(x); }
};

DiscreteForms assemble_forms(const EvenPiecewiseWeight& p, int m, const PlateParams& params,
                             std::size_t n);

struct EigenPair {
    double lambda = 0.0;
    Eigen::VectorXd x;
    int iterations = 0;
};

// Shift-free inverse iteration restricted to even vectors.
EigenPair smallest_eig(const DiscreteForms& forms, double tol = 1e-13, int max_iter = 2000);
// Next even eigenpair, deflating `first`.
EigenPair second_even_eig(const DiscreteForms& forms, const EigenPair& first,
                          double tol = 1e-12, int max_iter = 5000);
// Number of even discrete eigenvalues below lambda_max (Sylvester inertia).
std::size_t count_even_eigenvalues_below(const DiscreteForms& forms, double lambda_max);

// Mesh size tied to the fastest branch scale of the weighted problem;
// clamped to [16, 2000] elements.
std::size_t default_element_count(const EvenPiecewiseWeight& p, int m, const PlateParams& params);

struct FeEstimate {
    double extrapolated = 0.0;
    double coarse = 0.0;  // n elements
    double fine = 0.0;    // 2n elements
    std::size_t n = 0;
};
// Richardson extrapolation (order 4) from n and 2n elements; n = 0 picks the default.
FeEstimate fd_first_eigen(const EvenPiecewiseWeight& p, int m, const PlateParams& params,
                          std::size_t n = 0);

ModeFunction fe_mode(const DiscreteForms& forms, const Eigen::VectorXd& x);

}  // namespace plate
