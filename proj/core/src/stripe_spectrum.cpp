#include "plate/stripe_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <boost/math/tools/roots.hpp>

#include "plate/errors.hpp"
#include "plate/quadrature.hpp"

namespace plate {

namespace {

// past this argument the growing columns are rescaled by exp(-sqrt(x) shift)
constexpr double rescale_threshold = 30.0;

double m4(int m) { return std::pow(static_cast<double>(m), 4); }

struct Columns {
    EntireBasis eta_beta, omega_beta, eta_alpha, omega_alpha;
};

Columns make_columns(double lambda, int m, const TwoMaterialWeight& w, bool allow_shift)
{
    const double mm = static_cast<double>(m) * m;
    const double rb = std::sqrt(lambda * w.beta());
    const double ra = std::sqrt(lambda * w.alpha());
    Columns c;
    c.eta_beta = {mm + rb, 0.0};
    c.omega_beta = {mm - rb, 0.0};
    c.eta_alpha = {mm + ra, 0.0};
    c.omega_alpha = {mm - ra, 0.0};
    if (allow_shift) {
        if (std::sqrt(c.eta_beta.x) * w.ell() > rescale_threshold) c.eta_beta.shift = w.ell();
        if (std::sqrt(c.eta_alpha.x) * w.z() > rescale_threshold) c.eta_alpha.shift = w.z();
        if (c.omega_beta.x > 0.0 && std::sqrt(c.omega_beta.x) * w.ell() > rescale_threshold)
            c.omega_beta.shift = w.ell();
        if (c.omega_alpha.x > 0.0 && std::sqrt(c.omega_alpha.x) * w.z() > rescale_threshold)
            c.omega_alpha.shift = w.z();
    }
    return c;
}

std::array<double, 4> h1_row(const Columns& c, double t, int k)
{
    return {c.eta_beta.even(t, k), c.eta_beta.odd(t, k), c.omega_beta.even(t, k),
            c.omega_beta.odd(t, k)};
}

std::array<double, 2> h2_row(const Columns& c, double t, int k)
{
    return {c.eta_alpha.even(t, k), c.omega_alpha.even(t, k)};
}

void scale_rows(Eigen::Ref<Eigen::MatrixXd> M)
{
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        const double s = M.row(i).cwiseAbs().maxCoeff();
        if (s > 0.0) M.row(i) /= s;
    }
}

// Sign change search on [lo, hi] with `points` samples spaced uniformly in
// lambda^power; returns all brackets found.
template <class F>
std::vector<std::pair<double, double>> scan(F&& f, double lo, double hi, int points, double power,
                                            std::size_t max_found)
{
    std::vector<std::pair<double, double>> found;
    if (!(hi > lo)) return found;
    const double tlo = std::pow(lo, power), thi = std::pow(hi, power);
    double prev_x = lo, prev_f = f(lo);
    for (int i = 1; i <= points && found.size() < max_found; ++i) {
        const double t = tlo + (thi - tlo) * i / points;
        const double x = i == points ? hi : std::pow(t, 1.0 / power);
        const double fx = f(x);
        if (fx == 0.0) {
            found.emplace_back(x, x);
        } else if ((fx > 0.0) != (prev_f > 0.0) && prev_f != 0.0) {
            found.emplace_back(prev_x, x);
        }
        prev_x = x;
        prev_f = fx;
    }
    return found;
}

template <class F>
double refine(F&& f, std::pair<double, double> br, double rel_tol)
{
    if (br.first == br.second) return br.first;
    auto stop = [rel_tol](double a, double b) { return std::abs(b - a) <= rel_tol * std::abs(b); };
    auto [a, b] = boost::math::tools::bisect(f, br.first, br.second, stop);
    return 0.5 * (a + b);
}

struct Window {
    double lo, hi, power;
    CaseTag tag;
};

std::vector<Window> windows(int m, const TwoMaterialWeight& w, double lambda_max,
                            const ScanOptions& opts)
{
    const double lb = m4(m) / w.beta(), la = m4(m) / w.alpha();
    std::vector<Window> out;
    out.push_back({1e-6 * lb, std::min(lb * (1 - opts.band), lambda_max), 1.0, CaseTag::a});
    out.push_back({lb * (1 + opts.band), std::min(la * (1 - opts.band), lambda_max), 1.0, CaseTag::c});
    out.push_back({la * (1 + opts.band), lambda_max, 0.25, CaseTag::e});
    return out;
}

std::string describe(int m, const TwoMaterialWeight& w)
{
    std::ostringstream os;
    os.precision(10);
    os << "m=" << m << " alpha=" << w.alpha() << " beta=" << w.beta() << " z=" << w.z()
       << " ell=" << w.ell();
    return os.str();
}

SpectralPoint make_point(double lambda, int m, const PlateParams& params,
                         const TwoMaterialWeight& w, CaseTag tag)
{
    SpectralPoint sp;
    sp.m = m;
    sp.lambda = lambda;
    sp.case_tag = tag;
    sp.coeffs = secular_null_vector(lambda, m, params, w);
    return sp;
}

void check_inputs(int m, const PlateParams& params, const TwoMaterialWeight& w)
{
    if (m < 1) throw InvalidArgument("m must be >= 1");
    if (std::abs(w.ell() - params.ell) > 1e-14 * params.ell)
        throw InvalidArgument("weight and plate disagree on ell");
}

}  // namespace

CaseTag classify_case(double lambda, int m, const TwoMaterialWeight& w, double tol)
{
    if (!(lambda > 0.0)) throw InvalidArgument("lambda must be positive");
    const double mf = m4(m);
    if (std::abs(lambda * w.beta() - mf) <= tol * mf) return CaseTag::b;
    if (std::abs(lambda * w.alpha() - mf) <= tol * mf) return CaseTag::d;
    if (lambda * w.beta() < mf) return CaseTag::a;
    if (lambda * w.alpha() > mf) return CaseTag::e;
    return CaseTag::c;
}

BranchRoots branch_roots(double lambda, int m, const TwoMaterialWeight& w)
{
    const double mm = static_cast<double>(m) * m;
    BranchRoots r;
    r.case_tag = classify_case(lambda, m, w);
    r.eta_alpha = std::sqrt(mm + std::sqrt(lambda * w.alpha()));
    r.eta_beta = std::sqrt(mm + std::sqrt(lambda * w.beta()));
    r.omega_alpha = std::sqrt(std::abs(mm - std::sqrt(lambda * w.alpha())));
    r.omega_beta = std::sqrt(std::abs(mm - std::sqrt(lambda * w.beta())));
    return r;
}

Eigen::Matrix<double, 6, 6> secular_matrix(double lambda, int m, const PlateParams& params,
                                           const TwoMaterialWeight& w, RowScaling scaling)
{
    check_inputs(m, params, w);
    const CaseTag tag = classify_case(lambda, m, w);
    if (tag == CaseTag::b || tag == CaseTag::d)
        throw DegenerateCase("lambda lies in a transition band (case " + to_string(tag) + "), " +
                             describe(m, w));

    const double mm = static_cast<double>(m) * m;
    const double sigma = params.sigma;
    const Columns c = make_columns(lambda, m, w, scaling != RowScaling::none);
    const double ell = w.ell(), z = w.z();

    Eigen::Matrix<double, 6, 6> M = Eigen::Matrix<double, 6, 6>::Zero();
    const auto v0 = h1_row(c, ell, 0), v1 = h1_row(c, ell, 1);
    const auto v2 = h1_row(c, ell, 2), v3 = h1_row(c, ell, 3);
    for (int j = 0; j < 4; ++j) {
        M(0, j) = v2[j] - sigma * mm * v0[j];
        M(1, j) = v3[j] - (2.0 - sigma) * mm * v1[j];
    }
    for (int k = 0; k < 4; ++k) {
        const auto a = h1_row(c, z, k);
        const auto b = h2_row(c, z, k);
        for (int j = 0; j < 4; ++j) M(2 + k, j) = a[j];
        M(2 + k, 4) = -b[0];
        M(2 + k, 5) = -b[1];
    }
    if (scaling == RowScaling::unit_max) scale_rows(M);
    return M;
}

double secular_det(double lambda, int m, const PlateParams& params, const TwoMaterialWeight& w,
                   RowScaling scaling)
{
    return secular_matrix(lambda, m, params, w, scaling).partialPivLu().determinant();
}

std::array<double, 6> secular_null_vector(double lambda, int m, const PlateParams& params,
                                          const TwoMaterialWeight& w)
{
    const Eigen::Matrix<double, 6, 6> M = secular_matrix(lambda, m, params, w);
    Eigen::JacobiSVD<Eigen::Matrix<double, 6, 6>> svd(M);
    const auto& sv = svd.singularValues();
    if (sv(4) < 1e-8 * sv(0))
        throw NonSimpleRoot("secular matrix has a kernel of dimension > 1 at lambda, " +
                            describe(m, w));

    Eigen::Index pin = 0;
    M.colwise().norm().maxCoeff(&pin);
    Eigen::Matrix<double, 6, 5> A;
    for (Eigen::Index j = 0, k = 0; j < 6; ++j)
        if (j != pin) A.col(k++) = M.col(j);
    const Eigen::Matrix<double, 5, 1> rest = A.colPivHouseholderQr().solve(-M.col(pin));

    std::array<double, 6> v{};
    for (Eigen::Index j = 0, k = 0; j < 6; ++j) v[j] = j == pin ? 1.0 : rest(k++);
    return v;
}

std::vector<SpectralPoint> even_eigenvalues_below(int m, const PlateParams& params,
                                                  const TwoMaterialWeight& w, double lambda_max,
                                                  const ScanOptions& opts)
{
    check_inputs(m, params, w);
    std::vector<SpectralPoint> out;
    if (w.is_unweighted()) {
        throw InvalidArgument("even_eigenvalues_below needs a two-material weight");
    }
    auto f = [&](double l) { return secular_det(l, m, params, w); };
    for (const auto& win : windows(m, w, lambda_max, opts)) {
        for (const auto& br : scan(f, win.lo, win.hi, opts.points_per_case, win.power, 1000))
            out.push_back(make_point(refine(f, br, opts.rel_tol), m, params, w, win.tag));
    }
    return out;
}

SpectralPoint first_even_eigenvalue(int m, const PlateParams& params, const TwoMaterialWeight& w,
                                    const ScanOptions& opts)
{
    check_inputs(m, params, w);
    if (w.is_unweighted()) return unweighted_first(m, params, std::min(opts.rel_tol, 1e-14));

    auto f = [&](double l) { return secular_det(l, m, params, w); };
    const double lambda_max = opts.case_e_factor * m4(m) / w.alpha();
    for (const auto& win : windows(m, w, lambda_max, opts)) {
        const auto br = scan(f, win.lo, win.hi, opts.points_per_case, win.power, 1);
        if (!br.empty()) return make_point(refine(f, br.front(), opts.rel_tol), m, params, w, win.tag);
    }
    std::ostringstream os;
    os.precision(10);
    os << "no sign change of the secular determinant below " << lambda_max << " ("
       << describe(m, w) << ", " << opts.points_per_case << " samples per case window)";
    throw NoEigenvalueInBracket(os.str());
}

ModeFunction mode_function(const SpectralPoint& sp, const PlateParams& params,
                           const TwoMaterialWeight& w)
{
    if (sp.case_tag == CaseTag::unweighted || w.is_unweighted()) return unweighted_mode(sp.m, params);

    const auto v = secular_null_vector(sp.lambda, sp.m, params, w);
    const Columns c = make_columns(sp.lambda, sp.m, w, true);
    using Term = ModeFunction::Term;
    std::vector<ModeFunction::Piece> pieces(2);
    pieces[0] = {0.0, w.z(), {Term{v[4], c.eta_alpha, false}, Term{v[5], c.omega_alpha, false}}};
    pieces[1] = {w.z(), w.ell(),
                 {Term{v[0], c.eta_beta, false}, Term{v[1], c.eta_beta, true},
                  Term{v[2], c.omega_beta, false}, Term{v[3], c.omega_beta, true}}};
    ModeFunction phi = ModeFunction::closed_form(params, sp.m, ModeFunction::Origin::stripe_closed_form,
                                                 std::move(pieces));

    const double bps[] = {0.0, w.z(), w.ell()};
    const Grid g = Grid::aligned(bps, 4000);
    const SampledFunction phi2 = SampledFunction::from_function(g, [&](double y) {
        const double u = phi(y);
        return w(y) * u * u;
    });
    const double norm2 = 2.0 * phi2.integral();
    const double sign = phi(0.0) < 0.0 ? -1.0 : 1.0;
    return phi.scaled(sign / std::sqrt(norm2));
}

// ---------------------------------------------------------------------------

double unweighted_det(double mu, int m, const PlateParams& params)
{
    const double mm = static_cast<double>(m) * m;
    const double s = std::sqrt(mu);
    const EntireBasis eta{mm + s, 0.0}, omega{mm - s, 0.0};
    const double ell = params.ell, sigma = params.sigma;
    Eigen::Matrix2d M;
    M(0, 0) = eta.even(ell, 2) - sigma * mm * eta.even(ell, 0);
    M(0, 1) = omega.even(ell, 2) - sigma * mm * omega.even(ell, 0);
    M(1, 0) = eta.even(ell, 3) - (2.0 - sigma) * mm * eta.even(ell, 1);
    M(1, 1) = omega.even(ell, 3) - (2.0 - sigma) * mm * omega.even(ell, 1);
    scale_rows(M);
    return M.determinant();
}

SpectralPoint unweighted_first(int m, const PlateParams& params, double rel_tol)
{
    if (m < 1) throw InvalidArgument("m must be >= 1");
    const double sigma = params.sigma;
    const double lo = (1.0 - sigma * sigma) * m4(m) * (1.0 + 1e-14);
    const double hi = m4(m) * (1.0 - 1e-14);
    auto f = [&](double mu) { return unweighted_det(mu, m, params); };
    const double flo = f(lo), fhi = f(hi);
    if ((flo > 0.0) == (fhi > 0.0)) {
        std::ostringstream os;
        os << "unweighted determinant keeps its sign on ((1-sigma^2) m^4, m^4), m=" << m;
        throw NoEigenvalueInBracket(os.str());
    }
    SpectralPoint sp;
    sp.m = m;
    sp.lambda = refine(f, {lo, hi}, rel_tol);
    sp.case_tag = CaseTag::unweighted;

    const double mm = static_cast<double>(m) * m;
    const double s = std::sqrt(sp.lambda);
    const double k = (1.0 - sigma) * mm;
    const double A = (s - k) / std::cosh(std::sqrt(mm + s) * params.ell);
    const double B = (s + k) / std::cosh(std::sqrt(mm - s) * params.ell);
    sp.coeffs = {A, 0.0, B, 0.0, A, B};
    return sp;
}

ModeFunction unweighted_mode(int m, const PlateParams& params)
{
    const SpectralPoint sp = unweighted_first(m, params);
    const double mm = static_cast<double>(m) * m;
    const double s = std::sqrt(sp.lambda);
    using Term = ModeFunction::Term;
    std::vector<ModeFunction::Piece> pieces(1);
    pieces[0] = {0.0, params.ell,
                 {Term{sp.coeffs[0], EntireBasis{mm + s, 0.0}, false},
                  Term{sp.coeffs[2], EntireBasis{mm - s, 0.0}, false}}};
    ModeFunction phi = ModeFunction::closed_form(params, m, ModeFunction::Origin::unweighted_closed_form,
                                                 std::move(pieces));
    const double half[] = {0.0, params.ell};
    const Grid g = Grid::aligned(half, 4000);
    const SampledFunction phi2 = SampledFunction::from_function(g, [&](double y) {
        const double u = phi(y);
        return u * u;
    });
    return phi.scaled(1.0 / std::sqrt(2.0 * phi2.integral()));
}

}  // namespace plate
