#include "plate/mode_function.hpp"

#include <algorithm>
#include <cmath>

#include "plate/errors.hpp"

namespace plate {

ModeFunction ModeFunction::closed_form(const PlateParams& params, int m, Origin origin,
                                       std::vector<Piece> pieces)
{
    if (pieces.empty()) throw InvalidArgument("closed-form mode needs at least one piece");
    ModeFunction f;
    f.params_ = params;
    f.m_ = m;
    f.origin_ = origin;
    f.pieces_ = std::move(pieces);
    return f;
}

ModeFunction ModeFunction::sampled(const PlateParams& params, int m, Origin origin,
                                   std::vector<double> nodes,
                                   std::array<std::vector<double>, 4> derivs)
{
    if (nodes.size() < 2) throw InvalidArgument("sampled mode needs at least two nodes");
    for (const auto& d : derivs)
        if (d.size() != nodes.size()) throw InvalidArgument("sample arrays differ in length");
    for (std::size_t i = 1; i < nodes.size(); ++i)
        if (!(nodes[i] > nodes[i - 1])) throw InvalidArgument("nodes must increase");
    ModeFunction f;
    f.params_ = params;
    f.m_ = m;
    f.origin_ = origin;
    f.nodes_ = std::move(nodes);
    f.derivs_ = std::move(derivs);
    return f;
}

ModeFunction ModeFunction::scaled(double factor) const
{
    ModeFunction f = *this;
    f.scale_ *= factor;
    return f;
}

double ModeFunction::derivative(double y, int order) const
{
    if (order < 0 || order > 3) throw InvalidArgument("derivative order must be 0..3");
    const double ell = params_.ell;
    if (std::abs(y) > ell * (1.0 + 1e-12))
        throw InvalidArgument("mode evaluated outside [-ell, ell]");
    y = std::clamp(y, -ell, ell);
    return scale_ * (pieces_.empty() ? sampled_eval(y, order) : closed_eval(y, order));
}

double ModeFunction::closed_eval(double y, int order) const
{
    const double a = std::abs(y);
    const double sign = (y < 0.0 && order % 2 == 1) ? -1.0 : 1.0;
    const Piece* piece = &pieces_.back();
    for (const auto& p : pieces_) {
        if (a < p.hi) {
            piece = &p;
            break;
        }
    }
    double v = 0.0;
    for (const auto& t : piece->terms)
        v += t.coef * (t.odd ? t.basis.odd(a, order) : t.basis.even(a, order));
    return sign * v;
}

double ModeFunction::sampled_eval(double y, int order) const
{
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), y);
    std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - nodes_.begin(), 1)) - 1;
    i = std::min(i, nodes_.size() - 2);
    const double x0 = nodes_[i], x1 = nodes_[i + 1];
    const double h = x1 - x0;
    const double t = (y - x0) / h;

    // (f, f') pair: (phi, phi') for orders 0/1, (phi'', phi''') for orders 2/3
    const auto& f = derivs_[order < 2 ? 0 : 2];
    const auto& df = derivs_[order < 2 ? 1 : 3];
    const double f0 = f[i], f1 = f[i + 1], d0 = df[i] * h, d1 = df[i + 1] * h;

    if (order % 2 == 0) {
        const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
        const double h10 = t * (1 - t) * (1 - t);
        const double h01 = t * t * (3 - 2 * t);
        const double h11 = t * t * (t - 1);
        return h00 * f0 + h10 * d0 + h01 * f1 + h11 * d1;
    }
    const double g00 = 6 * t * t - 6 * t;
    const double g10 = 3 * t * t - 4 * t + 1;
    const double g01 = -g00;
    const double g11 = 3 * t * t - 2 * t;
    return (g00 * f0 + g10 * d0 + g01 * f1 + g11 * d1) / h;
}

const char* to_string(ModeFunction::Origin origin)
{
    switch (origin) {
    case ModeFunction::Origin::stripe_closed_form: return "stripe_closed_form";
    case ModeFunction::Origin::unweighted_closed_form: return "unweighted_closed_form";
    case ModeFunction::Origin::green_samples: return "green_samples";
    case ModeFunction::Origin::fe_samples: return "fe_samples";
    }
    return "?";
}

}  // namespace plate
