#include "plate/greens_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "plate/errors.hpp"

namespace plate {

namespace {

// q_m^{(k)}(t) = sign(t)^k (a_k + b_k |t|) exp(-m |t|)
struct KernelPoly {
    double a, b;
};

KernelPoly kernel_poly(int m, int k)
{
    const double md = m;
    switch (k) {
    case 0: return {1.0 / (4 * md * md * md), 1.0 / (4 * md * md)};
    case 1: return {0.0, -1.0 / (4 * md)};
    case 2: return {-1.0 / (4 * md), 0.25};
    case 3: return {0.5, -md / 4};
    default: throw InvalidArgument("kernel derivative order must be 0..3");
    }
}

void check_support(const SampledFunction& f, int m, const PlateParams& params)
{
    if (m < 1) throw InvalidArgument("m must be >= 1");
    const double ell = params.ell;
    const auto& g = f.grid();
    if (std::abs(g.a() + ell) > 1e-12 * ell || std::abs(g.b() - ell) > 1e-12 * ell)
        throw InvalidArgument("sampled function must live on [-ell, ell]");
    if (m * ell > 300.0) throw InvalidArgument("m * ell too large for the exponential moments");
}

// Cumulative moments A_k(y) = int_{-ell}^y s^k e^{m(s+ell)} f ds and
// B_k(y) = int_y^ell s^k e^{-m(s-ell)} f ds, k = 0, 1.
struct Moments {
    std::vector<double> A0, A1, B0, B1;
};

Moments moments(const SampledFunction& f, int m, double ell)
{
    const auto& grid = f.grid();
    const auto& y = grid.nodes();
    const std::size_t n = y.size();
    Moments mo{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n),
               std::vector<double>(n)};
    std::vector<double> g0, g1, c0, c1;
    const auto& segs = grid.segments();

    double acc0 = 0.0, acc1 = 0.0;
    for (std::size_t s = 0; s < segs.size(); ++s) {
        const auto& sg = segs[s];
        const std::size_t len = sg.last - sg.first + 1;
        g0.resize(len); g1.resize(len); c0.resize(len); c1.resize(len);
        for (std::size_t j = 0; j < len; ++j) {
            const std::size_t i = sg.first + j;
            const double v = f.in_segment(s, i) * std::exp(m * (y[i] + ell));
            g0[j] = v;
            g1[j] = v * y[i];
        }
        cumulative_simpson(g0, sg.h, c0);
        cumulative_simpson(g1, sg.h, c1);
        for (std::size_t j = 0; j < len; ++j) {
            mo.A0[sg.first + j] = acc0 + c0[j];
            mo.A1[sg.first + j] = acc1 + c1[j];
        }
        acc0 += c0.back();
        acc1 += c1.back();
    }

    acc0 = acc1 = 0.0;
    for (std::size_t s = segs.size(); s-- > 0;) {
        const auto& sg = segs[s];
        const std::size_t len = sg.last - sg.first + 1;
        g0.resize(len); g1.resize(len); c0.resize(len); c1.resize(len);
        for (std::size_t j = 0; j < len; ++j) {
            const std::size_t i = sg.last - j;
            const double v = f.in_segment(s, i) * std::exp(-m * (y[i] - ell));
            g0[j] = v;
            g1[j] = v * y[i];
        }
        cumulative_simpson(g0, sg.h, c0);
        cumulative_simpson(g1, sg.h, c1);
        for (std::size_t j = 0; j < len; ++j) {
            mo.B0[sg.last - j] = acc0 + c0[j];
            mo.B1[sg.last - j] = acc1 + c1[j];
        }
        acc0 += c0.back();
        acc1 += c1.back();
    }
    return mo;
}

std::array<std::vector<double>, 4> convolve(const SampledFunction& f, int m, double ell)
{
    const Moments mo = moments(f, m, ell);
    const auto& y = f.grid().nodes();
    std::array<std::vector<double>, 4> out;
    for (int k = 0; k < 4; ++k) {
        const KernelPoly kp = kernel_poly(m, k);
        const double sign = k % 2 ? -1.0 : 1.0;
        auto& d = out[k];
        d.resize(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) {
            const double el = std::exp(-m * (y[i] + ell));
            const double er = std::exp(m * (y[i] - ell));
            d[i] = el * ((kp.a + kp.b * y[i]) * mo.A0[i] - kp.b * mo.A1[i]) +
                   sign * er * ((kp.a - kp.b * y[i]) * mo.B0[i] + kp.b * mo.B1[i]);
        }
    }
    return out;
}

double weighted_integral(const SampledFunction& f, const std::function<double(double)>& k)
{
    return (f * SampledFunction::from_function(f.grid(), k)).integral();
}

struct NodalSolution {
    std::array<std::vector<double>, 4> d;
    HomogeneousCoeffs coeffs;
    BoundaryData boundary;
};

NodalSolution nodal_solve(const SampledFunction& f, int m, const PlateParams& params)
{
    check_support(f, m, params);
    NodalSolution s;
    s.d = convolve(f, m, params.ell);
    s.boundary = boundary_data(f, m, params);
    s.coeffs = homogeneous_coefficients(s.boundary, m, params);
    const auto& y = f.grid().nodes();
    for (int k = 0; k < 4; ++k)
        for (std::size_t i = 0; i < y.size(); ++i) s.d[k][i] += homogeneous_part(s.coeffs, m, y[i], k);
    return s;
}

double integrate_nodal(const Grid& grid, const SampledFunction& p, const std::vector<double>& u,
                       const std::vector<double>& v)
{
    std::vector<double> l(u.size()), r(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        l[i] = p.left()[i] * u[i] * v[i];
        r[i] = p.right()[i] * u[i] * v[i];
    }
    return SampledFunction(grid, std::move(l), std::move(r)).integral();
}

}  // namespace

double kernel_qm(int m, double y, int derivative)
{
    if (m < 1) throw InvalidArgument("m must be >= 1");
    const KernelPoly kp = kernel_poly(m, derivative);
    const double t = std::abs(y);
    const double sign = (y < 0.0 && derivative % 2) ? -1.0 : 1.0;
    return sign * (kp.a + kp.b * t) * std::exp(-m * t);
}

ParticularSolution particular_solution(const SampledFunction& f, int m, const PlateParams& params)
{
    check_support(f, m, params);
    return {f.grid(), convolve(f, m, params.ell)};
}

BoundaryData boundary_data(const SampledFunction& f, int m, const PlateParams& params)
{
    check_support(f, m, params);
    const double ell = params.ell, sigma = params.sigma, md = m;
    auto v_kernel = [=](double t) {
        return std::exp(-md * t) / (4 * md) * (1 + sigma - md * t * (1 - sigma));
    };
    auto w_kernel = [=](double t) { return std::exp(-md * t) / 4 * (2 + md * t * (1 - sigma)); };
    BoundaryData bd;
    bd.V_plus = weighted_integral(f, [&](double s) { return v_kernel(ell - s); });
    bd.V_minus = weighted_integral(f, [&](double s) { return v_kernel(s + ell); });
    bd.W_plus = weighted_integral(f, [&](double s) { return w_kernel(ell - s); });
    bd.W_minus = -weighted_integral(f, [&](double s) { return w_kernel(s + ell); });
    return bd;
}

EdgeFunctions edge_functions(int m, const PlateParams& params)
{
    const double z = m * params.ell, sigma = params.sigma;
    const double sh = std::sinh(z), ch = std::cosh(z);
    EdgeFunctions e;
    e.F = (3 + sigma) * sh * ch - z * (1 - sigma);
    e.Fbar = (3 + sigma) * sh * ch + z * (1 - sigma);
    e.A = (1 + sigma) * sh - (1 - sigma) * z * ch;
    e.B = 2 * ch + (1 - sigma) * z * sh;
    e.Abar = (1 + sigma) * ch - (1 - sigma) * z * sh;
    e.Bbar = 2 * sh + (1 - sigma) * z * ch;
    return e;
}

HomogeneousCoeffs homogeneous_coefficients(const BoundaryData& bd, int m, const PlateParams& params)
{
    if (m < 1) throw InvalidArgument("m must be >= 1");
    const EdgeFunctions e = edge_functions(m, params);
    const double md = m, sigma = params.sigma, z = m * params.ell;
    const double sh = std::sinh(z), ch = std::cosh(z);
    const double vs = bd.V_plus + bd.V_minus, vd = bd.V_plus - bd.V_minus;
    const double ws = bd.W_plus + bd.W_minus, wd = bd.W_plus - bd.W_minus;
    HomogeneousCoeffs c;
    c.c1 = (md * e.A * vs + e.B * wd) / (2 * md * md * md * (1 - sigma) * e.F);
    c.c2 = (md * e.Abar * vd + e.Bbar * ws) / (2 * md * md * md * (1 - sigma) * e.Fbar);
    c.c3 = (md * ch * vd - sh * ws) / (2 * md * md * e.Fbar);
    c.c4 = (md * sh * vs - ch * wd) / (2 * md * md * e.F);
    return c;
}

double homogeneous_part(const HomogeneousCoeffs& c, int m, double y, int k)
{
    if (k < 0 || k > 3) throw InvalidArgument("derivative order must be 0..3");
    const double md = m;
    const double ch = std::cosh(md * y), sh = std::sinh(md * y);
    // d^j/dy^j of cosh(my) and sinh(my)
    auto dch = [&](int j) { return std::pow(md, j) * (j % 2 ? sh : ch); };
    auto dsh = [&](int j) { return std::pow(md, j) * (j % 2 ? ch : sh); };
    double v = c.c1 * dch(k) + c.c2 * dsh(k) + c.c3 * y * dch(k) + c.c4 * y * dsh(k);
    if (k > 0) v += k * (c.c3 * dch(k - 1) + c.c4 * dsh(k - 1));
    return v;
}

LmSolution solve_Lm(const SampledFunction& f, int m, const PlateParams& params)
{
    NodalSolution s = nodal_solve(f, m, params);
    return {ModeFunction::sampled(params, m, ModeFunction::Origin::green_samples, f.grid().nodes(),
                                  std::move(s.d)),
            s.coeffs, s.boundary};
}

PppResult ppp_check(const SampledFunction& f, int m, const PlateParams& params)
{
    bool nonzero = false;
    for (std::size_t i = 0; i < f.left().size(); ++i) {
        if (f.left()[i] < 0.0 || f.right()[i] < 0.0)
            throw InvalidArgument("ppp_check needs a nonnegative right-hand side");
        nonzero = nonzero || f.left()[i] > 0.0 || f.right()[i] > 0.0;
    }
    if (!nonzero) throw InvalidArgument("ppp_check needs a right-hand side that is not identically zero");

    const NodalSolution s = nodal_solve(f, m, params);
    PppResult r;
    r.coeffs = s.coeffs;
    r.min_w = *std::min_element(s.d[0].begin(), s.d[0].end());
    r.positive = r.min_w > 0.0;

    const double L = 10.0 * params.ell + 10.0 / m;
    const int samples = 20000;
    double prev = homogeneous_part(s.coeffs, m, -L);
    for (int i = 1; i <= samples; ++i) {
        const double v = homogeneous_part(s.coeffs, m, -L + 2.0 * L * i / samples);
        if ((v > 0.0) != (prev > 0.0)) ++r.homogeneous_zeros;
        prev = v;
    }
    return r;
}

// ---------------------------------------------------------------------------

double g_map(double z, double sigma)
{
    return std::sinh(z) * ((1 + sigma) * (1 + sigma) + 2 * z * (1 - sigma)) +
           std::cosh(z) * (4 - (1 - sigma * sigma) * z);
}

double p_map(double z, double sigma)
{
    const double s2 = std::sinh(2 * z), c2 = std::cosh(2 * z);
    return 2 * (3 + sigma) / (1 - sigma) * s2 * c2 + 4 * z +
           (1 + sigma) * (1 + sigma) * (3 + sigma) / (2 * (1 - sigma)) * s2 * s2 -
           2 * (1 - sigma * sigma) * z * z;
}

double q_map(double z, double sigma)
{
    const double s2 = std::sinh(2 * z), c2 = std::cosh(2 * z);
    return (3 + sigma) / 2 * s2 * (2 * c2 - (1 + sigma) * s2) + 2 * (1 - sigma) * z +
           2 * (1 - sigma) * (1 - sigma) * z * z;
}

double r_map(double z, double sigma)
{
    const double s2 = std::sinh(2 * z), c2 = std::cosh(2 * z);
    return 2 * (3 + sigma) / (1 - sigma) * s2 + z * (4 * c2 - 2 * (1 + sigma) * s2);
}

double s_map(double z, double sigma)
{
    const double s2 = std::sinh(2 * z), c2 = std::cosh(2 * z);
    return (3 + sigma) * s2 + (1 - sigma) * z * (2 * c2 - (1 + sigma) * s2) +
           (1 - sigma) * (3 + sigma) * z * s2;
}

EdgeCoefficients edge_coefficients(double z, double sigma, bool stable)
{
    const double sh = std::sinh(z), ch = std::cosh(z);
    const double F = (3 + sigma) * sh * ch - z * (1 - sigma);
    const double Fb = (3 + sigma) * sh * ch + z * (1 - sigma);
    EdgeCoefficients e;
    if (stable) {
        const double FF = F * Fb;
        e.C = p_map(z, sigma) / FF;
        e.D = q_map(z, sigma) / FF;
        e.Cbar = r_map(z, sigma) / FF;
        e.Dbar = s_map(z, sigma) / FF;
        return e;
    }
    const double s2 = std::sinh(2 * z);
    const double sum = ch * ch / F + sh * sh / Fb, diff = ch * ch / F - sh * sh / Fb;
    const double isum = 1 / F + 1 / Fb, idiff = 1 / F - 1 / Fb;
    e.C = 4 / (1 - sigma) * sum + (1 + sigma) * (1 + sigma) / (2 * (1 - sigma)) * s2 * isum -
          z * (1 + sigma) * idiff;
    e.D = 2 * sum - (1 + sigma) / 2 * s2 * isum + z * (1 - sigma) * idiff;
    e.Cbar = 4 / (1 - sigma) * diff + (1 + sigma) * (1 + sigma) / (2 * (1 - sigma)) * s2 * idiff -
             z * (1 + sigma) * isum;
    e.Dbar = 2 * diff - (1 + sigma) / 2 * s2 * idiff + z * (1 - sigma) * isum;
    return e;
}

SignLemmaReport sign_lemma_report(const std::vector<double>& sigmas, double z_max,
                                  std::size_t points)
{
    if (!(z_max > 0.0) || points < 1) throw InvalidArgument("sign lemma grid needs z_max > 0");
    SignLemmaReport rep;
    for (double sigma : sigmas) {
        if (!(sigma > 0.0 && sigma < 0.5)) throw InvalidArgument("sigma must lie in (0, 1/2)");
        for (std::size_t i = 1; i <= points; ++i) {
            SignLemmaRow row;
            row.sigma = sigma;
            row.z = z_max * static_cast<double>(i) / static_cast<double>(points);
            const double z = row.z;
            row.g = g_map(z, sigma);
            row.p = p_map(z, sigma);
            row.q = q_map(z, sigma);
            row.r = r_map(z, sigma);
            row.s = s_map(z, sigma);
            const EdgeCoefficients e = edge_coefficients(z, sigma);
            row.C = e.C;
            row.D = e.D;
            row.Cbar = e.Cbar;
            row.Dbar = e.Dbar;
            const double sh = std::sinh(z), ch = std::cosh(z);
            row.F = (3 + sigma) * sh * ch - z * (1 - sigma);
            row.Fbar = (3 + sigma) * sh * ch + z * (1 - sigma);
            const double e2 = std::exp(-2 * z);
            row.edge_gap = (1 + e2) - 0.5 * (1 + sigma) * (1 - e2);
            row.positive = row.g > 0 && row.p > 0 && row.q > 0 && row.r > 0 && row.s > 0 &&
                           row.C > 0 && row.D > 0 && row.Cbar > 0 && row.Dbar > 0 && row.F > 0 &&
                           row.Fbar > 0 && row.edge_gap > 0;
            if (!row.positive) ++rep.violations;
            rep.rows.push_back(row);
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------

InversePowerResult inverse_power_first(const EvenPiecewiseWeight& p, int m,
                                       const PlateParams& params, double tol,
                                       const GreenOptions& opts)
{
    if (std::abs(p.ell() - params.ell) > 1e-14 * params.ell)
        throw InvalidArgument("weight and plate disagree on ell");
    if (!(p.alpha() > 0.0)) throw InvalidArgument("weight must be bounded below by a positive alpha");

    const Grid grid = Grid::mirrored(p.breakpoints(), opts.cells);
    const SampledFunction pw = SampledFunction::from_function(grid, [&](double y) { return p(y); });
    std::vector<double> phi(grid.size(), 1.0);

    double lambda = 0.0;
    for (int it = 1; it <= opts.max_iter; ++it) {
        std::vector<double> l(phi.size()), r(phi.size());
        for (std::size_t i = 0; i < phi.size(); ++i) {
            l[i] = pw.left()[i] * phi[i];
            r[i] = pw.right()[i] * phi[i];
        }
        NodalSolution s = nodal_solve(SampledFunction(grid, std::move(l), std::move(r)), m, params);
        const auto& w = s.d[0];
        // <w, w>_m = int p phi w by the weak form of L_m w = p phi
        const double pww = integrate_nodal(grid, pw, w, w);
        const double next = integrate_nodal(grid, pw, phi, w) / pww;
        const double scale = 1.0 / std::sqrt(pww);
        for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = w[i] * scale;

        const bool done = it > 1 && std::abs(next - lambda) <= tol * next;
        lambda = next;
        if (done) {
            for (auto& d : s.d)
                for (auto& v : d) v *= scale;
            InversePowerResult res{lambda, it,
                                   ModeFunction::sampled(params, m, ModeFunction::Origin::green_samples,
                                                         grid.nodes(), std::move(s.d))};
            return res;
        }
    }
    std::ostringstream os;
    os << "inverse power did not converge in " << opts.max_iter << " iterations (m=" << m << ")";
    throw NonConvergence(os.str());
}

}  // namespace plate
