#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace plate {

inline constexpr double default_sigma = 0.2;

// Plate (0, pi) x (-ell, ell), Poisson ratio sigma.
struct PlateParams {
    double ell = 0.0;
    double sigma = default_sigma;
};

// Throws InvalidArgument unless ell > 0 and 0 < sigma < 1/2.
PlateParams make_plate(double ell, double sigma = default_sigma);

// default strip half-width pi/150
double default_ell();

class EvenPiecewiseWeight;

// alpha on (-z, z), beta on the outer bands.
class TwoMaterialWeight {
public:
    TwoMaterialWeight(double alpha, double beta, double z, double ell);

    static TwoMaterialWeight unweighted(double ell);
    // z chosen so that the mean of the weight is one
    static TwoMaterialWeight mass_normalized(double alpha, double beta, double ell);

    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double z() const { return z_; }
    double ell() const { return ell_; }
    bool is_unweighted() const { return alpha_ == 1.0 && beta_ == 1.0; }

    double operator()(double y) const;
    // integral over (0, ell)
    double half_mass() const;
    bool mass_normalized(double rel_tol = 1e-12) const;

    EvenPiecewiseWeight to_piecewise() const;

private:
    double alpha_, beta_, z_, ell_;
};

// Even step weight given on [0, ell] by breakpoints 0 = y_0 < ... < y_k = ell
// and one value per piece, with a declared envelope [alpha, beta].
class EvenPiecewiseWeight {
public:
    EvenPiecewiseWeight(std::vector<double> breakpoints, std::vector<double> values,
                        double alpha, double beta);

    static EvenPiecewiseWeight constant(double ell, double value = 1.0);

    std::span<const double> breakpoints() const { return breakpoints_; }
    std::span<const double> values() const { return values_; }
    std::size_t pieces() const { return values_.size(); }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double ell() const { return breakpoints_.back(); }

    double operator()(double y) const;
    double half_mass() const;
    bool mass_normalized(double rel_tol = 1e-12) const;
    // values <= 1 up to some crossing, >= 1 after it
    bool single_crossing() const;
    bool in_class(double rel_tol = 1e-12) const;
    bool is_constant() const;

    // two-level weight with inner value <= 1 <= outer value
    std::optional<TwoMaterialWeight> as_stripe() const;

private:
    std::vector<double> breakpoints_;
    std::vector<double> values_;
    double alpha_, beta_;
};

// Ties at a breakpoint resolve to the outer piece.
double weight_eval(const TwoMaterialWeight& w, double y);
double weight_eval(const EvenPiecewiseWeight& w, double y);

// ell (beta - 1) / (beta - alpha)
double mass_normalized_interface(double alpha, double beta, double ell);

// Hypothesis (C0): s solves tanh(sqrt2 s ell) = k^2 sqrt2 s ell with
// k = sigma / (2 - sigma); satisfied when s is not an integer.
struct C0Report {
    double s = 0.0;
    double distance_to_integer = 0.0;
    bool satisfied = false;
};
C0Report check_c0(const PlateParams& params, double integer_tol = 1e-6);

// x coth x > ((2 - sigma) / sigma)^2 with x = sqrt2 m ell
bool nu11_exists(int m, const PlateParams& params);

enum class CaseTag { a, b, c, d, e, unweighted };
enum class Parity { even };

std::string to_string(CaseTag tag);

// Coefficients refer to the column basis of secular_matrix:
// {C_eta_beta, S_eta_beta, C_omega_beta, S_omega_beta, C_eta_alpha, C_omega_alpha}
// where C(x, t) = cosh(sqrt(x) t), S(x, t) = sinh(sqrt(x) t) / sqrt(x), continued
// analytically through x <= 0.
struct SpectralPoint {
    int m = 0;
    double lambda = 0.0;
    Parity parity = Parity::even;
    CaseTag case_tag = CaseTag::c;
    std::array<double, 6> coeffs{};
};

}  // namespace plate
