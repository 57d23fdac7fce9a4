#include "plate/plate_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "plate/errors.hpp"

namespace plate {

namespace {

std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

bool rel_close(double a, double b, double rel_tol)
{
    return std::abs(a - b) <= rel_tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace

PlateParams make_plate(double ell, double sigma)
{
    if (!(ell > 0.0) || !std::isfinite(ell))
        throw InvalidArgument("ell must be positive, got " + fmt(ell));
    if (!(sigma > 0.0 && sigma < 0.5))
        throw InvalidArgument("sigma must lie in (0, 1/2), got " + fmt(sigma));
    return {ell, sigma};
}

double default_ell() { return std::numbers::pi / 150.0; }

std::string to_string(CaseTag tag)
{
    switch (tag) {
    case CaseTag::a: return "a";
    case CaseTag::b: return "b";
    case CaseTag::c: return "c";
    case CaseTag::d: return "d";
    case CaseTag::e: return "e";
    case CaseTag::unweighted: return "unweighted";
    }
    return "?";
}

double mass_normalized_interface(double alpha, double beta, double ell)
{
    if (!(alpha < 1.0)) throw InvalidArgument("alpha must be < 1, got " + fmt(alpha));
    if (!(beta > 1.0)) throw InvalidArgument("beta must be > 1, got " + fmt(beta));
    if (!(alpha > 0.0)) throw InvalidArgument("alpha must be positive, got " + fmt(alpha));
    if (!(ell > 0.0)) throw InvalidArgument("ell must be positive, got " + fmt(ell));
    return ell * (beta - 1.0) / (beta - alpha);
}

// ---------------------------------------------------------------------------

TwoMaterialWeight::TwoMaterialWeight(double alpha, double beta, double z, double ell)
    : alpha_(alpha), beta_(beta), z_(z), ell_(ell)
{
    if (!(ell > 0.0)) throw InvalidArgument("ell must be positive, got " + fmt(ell));
    if (!(alpha > 0.0)) throw InvalidArgument("alpha must be positive, got " + fmt(alpha));
    if (!(alpha <= 1.0 && 1.0 <= beta))
        throw InvalidArgument("need alpha <= 1 <= beta, got alpha=" + fmt(alpha) + " beta=" + fmt(beta));
    if (!(alpha < beta) && !is_unweighted())
        throw InvalidArgument("need alpha < beta");
    if (!(z > 0.0 && z < ell))
        throw InvalidArgument("interface z must lie in (0, ell), got " + fmt(z));
}

TwoMaterialWeight TwoMaterialWeight::unweighted(double ell)
{
    return TwoMaterialWeight(1.0, 1.0, 0.5 * ell, ell);
}

TwoMaterialWeight TwoMaterialWeight::mass_normalized(double alpha, double beta, double ell)
{
    return TwoMaterialWeight(alpha, beta, mass_normalized_interface(alpha, beta, ell), ell);
}

double TwoMaterialWeight::operator()(double y) const
{
    if (std::abs(y) > ell_)
        throw InvalidArgument("|y| exceeds ell: y=" + fmt(y));
    return std::abs(y) < z_ ? alpha_ : beta_;
}

double TwoMaterialWeight::half_mass() const { return alpha_ * z_ + beta_ * (ell_ - z_); }

bool TwoMaterialWeight::mass_normalized(double rel_tol) const
{
    return rel_close(half_mass(), ell_, rel_tol);
}

EvenPiecewiseWeight TwoMaterialWeight::to_piecewise() const
{
    if (is_unweighted()) return EvenPiecewiseWeight::constant(ell_, 1.0);
    return EvenPiecewiseWeight({0.0, z_, ell_}, {alpha_, beta_}, alpha_, beta_);
}

// ---------------------------------------------------------------------------

EvenPiecewiseWeight::EvenPiecewiseWeight(std::vector<double> breakpoints,
                                         std::vector<double> values, double alpha, double beta)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)), alpha_(alpha), beta_(beta)
{
    if (values_.empty()) throw InvalidArgument("weight needs at least one piece");
    if (breakpoints_.size() != values_.size() + 1)
        throw InvalidArgument("breakpoints must have one more entry than values");
    if (breakpoints_.front() != 0.0) throw InvalidArgument("first breakpoint must be 0");
    for (std::size_t i = 1; i < breakpoints_.size(); ++i)
        if (!(breakpoints_[i] > breakpoints_[i - 1]))
            throw InvalidArgument("breakpoints must be strictly increasing");
    if (!(alpha > 0.0 && alpha <= beta))
        throw InvalidArgument("envelope needs 0 < alpha <= beta");
    for (double v : values_)
        if (!(v >= alpha && v <= beta))
            throw InvalidArgument("value " + fmt(v) + " outside envelope [" + fmt(alpha) + ", " +
                                  fmt(beta) + "]");
}

EvenPiecewiseWeight EvenPiecewiseWeight::constant(double ell, double value)
{
    return EvenPiecewiseWeight({0.0, ell}, {value}, value, value);
}

double EvenPiecewiseWeight::operator()(double y) const
{
    double a = std::abs(y);
    if (a > ell()) throw InvalidArgument("|y| exceeds ell: y=" + fmt(y));
    // first breakpoint strictly greater than a; a breakpoint itself goes outward
    auto it = std::upper_bound(breakpoints_.begin() + 1, breakpoints_.end(), a);
    std::size_t piece = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
    return values_[std::min(piece, values_.size() - 1)];
}

double EvenPiecewiseWeight::half_mass() const
{
    double s = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i)
        s += values_[i] * (breakpoints_[i + 1] - breakpoints_[i]);
    return s;
}

bool EvenPiecewiseWeight::mass_normalized(double rel_tol) const
{
    return rel_close(half_mass(), ell(), rel_tol);
}

bool EvenPiecewiseWeight::single_crossing() const
{
    std::size_t i = 0;
    while (i < values_.size() && values_[i] <= 1.0) ++i;
    while (i < values_.size() && values_[i] >= 1.0) ++i;
    return i == values_.size();
}

bool EvenPiecewiseWeight::in_class(double rel_tol) const
{
    return single_crossing() && mass_normalized(rel_tol);
}

bool EvenPiecewiseWeight::is_constant() const
{
    return std::all_of(values_.begin(), values_.end(), [&](double v) { return v == values_[0]; });
}

std::optional<TwoMaterialWeight> EvenPiecewiseWeight::as_stripe() const
{
    if (is_constant()) {
        if (values_[0] == 1.0) return TwoMaterialWeight::unweighted(ell());
        return std::nullopt;
    }
    // merge equal neighbours first
    std::vector<double> levels;
    std::vector<double> ends;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!levels.empty() && levels.back() == values_[i]) {
            ends.back() = breakpoints_[i + 1];
        } else {
            levels.push_back(values_[i]);
            ends.push_back(breakpoints_[i + 1]);
        }
    }
    if (levels.size() != 2) return std::nullopt;
    if (!(levels[0] <= 1.0 && 1.0 <= levels[1])) return std::nullopt;
    return TwoMaterialWeight(levels[0], levels[1], ends[0], ell());
}

double weight_eval(const TwoMaterialWeight& w, double y) { return w(y); }
double weight_eval(const EvenPiecewiseWeight& w, double y) { return w(y); }

// ---------------------------------------------------------------------------

C0Report check_c0(const PlateParams& params, double integer_tol)
{
    const double k = std::pow(params.sigma / (2.0 - params.sigma), 2);
    // tanh(u) = k u has one positive root, below 1/k since tanh < 1
    auto f = [k](double u) { return std::tanh(u) - k * u; };
    auto stop = [](double a, double b) { return std::abs(b - a) <= 4e-16 * std::abs(b); };
    double lo = 1e-300, hi = 1.0 / k;
    while (f(hi) > 0.0) hi *= 2.0;
    auto [a, b] = boost::math::tools::bisect(f, lo, hi, stop);
    const double u = 0.5 * (a + b);

    C0Report r;
    r.s = u / (std::numbers::sqrt2 * params.ell);
    r.distance_to_integer = std::abs(r.s - std::round(r.s));
    r.satisfied = r.distance_to_integer > integer_tol;
    return r;
}

bool nu11_exists(int m, const PlateParams& params)
{
    if (m < 1) throw InvalidArgument("m must be >= 1");
    const double x = params.ell * m * std::numbers::sqrt2;
    const double rhs = std::pow((2.0 - params.sigma) / params.sigma, 2);
    return x / std::tanh(x) > rhs;
}

}  // namespace plate
