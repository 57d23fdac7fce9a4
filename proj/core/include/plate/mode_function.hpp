#pragma once

#include <array>
#include <vector>

#include "plate/entire_basis.hpp"
#include "plate/plate_core.hpp"

namespace plate {

// Profile phi(y) on [-ell, ell] with derivatives up to order three.
class ModeFunction {
public:
    enum class Origin { stripe_closed_form, unweighted_closed_form, green_samples, fe_samples };

    struct Term {
        double coef = 0.0;
        EntireBasis basis;
        bool odd = false;
    };
    // Terms valid for |y| in [lo, hi]; the profile is extended evenly.
    struct Piece {
        double lo = 0.0;
        double hi = 0.0;
        std::vector<Term> terms;
    };

    static ModeFunction closed_form(const PlateParams& params, int m, Origin origin,
                                    std::vector<Piece> pieces);

    // Nodal values of phi, phi', phi'', phi''' on increasing nodes spanning
    // [-ell, ell]. Evaluation is cubic Hermite in (phi, phi') and (phi'', phi''').
    static ModeFunction sampled(const PlateParams& params, int m, Origin origin,
                                std::vector<double> nodes,
                                std::array<std::vector<double>, 4> derivs);

    double operator()(double y) const { return derivative(y, 0); }
    double derivative(double y, int order) const;

    ModeFunction scaled(double factor) const;

    const PlateParams& params() const { return params_; }
    int m() const { return m_; }
    Origin origin() const { return origin_; }
    bool is_closed_form() const { return !pieces_.empty(); }

    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& nodal(int order) const { return derivs_.at(order); }

private:
    ModeFunction() = default;

    double closed_eval(double y, int order) const;
    double sampled_eval(double y, int order) const;

    PlateParams params_{};
    int m_ = 0;
    Origin origin_ = Origin::stripe_closed_form;
    double scale_ = 1.0;
    std::vector<Piece> pieces_;
    std::vector<double> nodes_;
    std::array<std::vector<double>, 4> derivs_;
};

const char* to_string(ModeFunction::Origin origin);

}  // namespace plate
