#include "plate/fe_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/SparseCholesky>

#include "plate/errors.hpp"

namespace plate {

namespace {

// Cubic Hermite shape functions on an element of length h, local coordinate t,
// derivatives in y. Order: v0, s0, v1, s1.
struct Shape {
    std::array<double, 4> n, d1, d2, d3;
};

Shape shape(double t, double h)
{
    Shape s;
    s.n = {1 - 3 * t * t + 2 * t * t * t, h * (t - 2 * t * t + t * t * t), 3 * t * t - 2 * t * t * t,
           h * (-t * t + t * t * t)};
    s.d1 = {(-6 * t + 6 * t * t) / h, 1 - 4 * t + 3 * t * t, (6 * t - 6 * t * t) / h,
            -2 * t + 3 * t * t};
    s.d2 = {(-6 + 12 * t) / (h * h), (-4 + 6 * t) / h, (6 - 12 * t) / (h * h), (-2 + 6 * t) / h};
    s.d3 = {12 / (h * h * h), 6 / (h * h), -12 / (h * h * h), 6 / (h * h)};
    return s;
}

// exact Gauss nodes/weights to full precision
const std::array<double, 5>& gx()
{
    static const std::array<double, 5> x = [] {
        const double a = std::sqrt(5.0 - 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
        const double b = std::sqrt(5.0 + 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
        return std::array<double, 5>{0.5 * (1 - b), 0.5 * (1 - a), 0.5, 0.5 * (1 + a), 0.5 * (1 + b)};
    }();
    return x;
}

const std::array<double, 5>& gw()
{
    static const std::array<double, 5> w = [] {
        const double wa = (322.0 + 13.0 * std::sqrt(70.0)) / 900.0;
        const double wb = (322.0 - 13.0 * std::sqrt(70.0)) / 900.0;
        return std::array<double, 5>{0.5 * wb, 0.5 * wa, 0.5 * 128.0 / 225.0, 0.5 * wa, 0.5 * wb};
    }();
    return w;
}

// Symmetric mesh nodes: half mesh over the weight pieces, mirrored.
std::vector<double> mesh_nodes(const EvenPiecewiseWeight& p, std::size_t n)
{
    if (n < 2 || n % 2) throw InvalidArgument("element count must be even and >= 2");
    const auto bp = p.breakpoints();
    const double ell = p.ell();
    const std::size_t half = n / 2;
    std::vector<std::size_t> counts(p.pieces());
    for (std::size_t i = 0; i < p.pieces(); ++i)
        counts[i] = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::llround(half * (bp[i + 1] - bp[i]) / ell)));
    std::vector<double> h{0.0};
    for (std::size_t i = 0; i < p.pieces(); ++i) {
        const double step = (bp[i + 1] - bp[i]) / static_cast<double>(counts[i]);
        for (std::size_t j = 1; j < counts[i]; ++j) h.push_back(bp[i] + step * static_cast<double>(j));
        h.push_back(bp[i + 1]);
    }
    std::vector<double> nodes;
    nodes.reserve(2 * h.size() - 1);
    for (std::size_t i = h.size(); i-- > 1;) nodes.push_back(-h[i]);
    nodes.insert(nodes.end(), h.begin(), h.end());
    return nodes;
}

// Map from even coordinates to full dofs: centre value, then (value, slope)
// for each node right of the centre.
Eigen::SparseMatrix<double> even_projection(std::size_t nodes)
{
    const std::size_t n = nodes - 1;
    const std::size_t c = n / 2;
    auto red_v = [c](std::size_t i) { return i == c ? 0 : 1 + 2 * (i - c - 1); };
    auto red_s = [c](std::size_t i) { return 2 + 2 * (i - c - 1); };
    std::vector<Eigen::Triplet<double>> t;
    for (std::size_t i = 0; i < nodes; ++i) {
        const std::size_t j = i >= c ? i : n - i;
        const double ss = i >= c ? 1.0 : -1.0;
        t.emplace_back(2 * i, red_v(j), 1.0);
        if (j != c) t.emplace_back(2 * i + 1, red_s(j), ss);
    }
    Eigen::SparseMatrix<double> P(2 * nodes, n + 1);
    P.setFromTriplets(t.begin(), t.end());
    return P;
}

struct EvenSystem {
    Eigen::SparseMatrix<double> P, K, M;
};

EvenSystem even_system(const DiscreteForms& f)
{
    EvenSystem s;
    s.P = even_projection(f.nodes.size());
    s.K = s.P.transpose() * f.K * s.P;
    s.M = s.P.transpose() * f.M * s.P;
    return s;
}

template <class Solver>
void factor(Solver& solver, const Eigen::SparseMatrix<double>& A, const char* what)
{
    solver.compute(A);
    if (solver.info() != Eigen::Success)
        throw FactorizationFailure(std::string("factorization of ") + what + " failed");
}

}  // namespace

double DiscreteForms::energy(const Eigen::VectorXd& x) const
{
    const double mm = static_cast<double>(m) * m, sigma = params.sigma;
    double total = 0.0;
    for (std::size_t e = 0; e + 1 < nodes.size(); ++e) {
        const double h = nodes[e + 1] - nodes[e];
        const double u[4] = {x(2 * e), x(2 * e + 1), x(2 * e + 2), x(2 * e + 3)};
        double acc = 0.0;
        for (int q = 0; q < 5; ++q) {
            const Shape s = shape(gx()[q], h);
            double v = 0, d1 = 0, d2 = 0;
            for (int i = 0; i < 4; ++i) {
                v += s.n[i] * u[i];
                d1 += s.d1[i] * u[i];
                d2 += s.d2[i] * u[i];
            }
            acc += gw()[q] * (d2 * d2 + 2 * mm * (1 - sigma) * d1 * d1 - 2 * sigma * mm * d2 * v +
                              mm * mm * v * v);
        }
        total += acc * h;
    }
    return total;
}

double DiscreteForms::mass(const Eigen::VectorXd& x) const
{
    double total = 0.0;
    for (std::size_t e = 0; e + 1 < nodes.size(); ++e) {
        const double h = nodes[e + 1] - nodes[e];
        const double u[4] = {x(2 * e), x(2 * e + 1), x(2 * e + 2), x(2 * e + 3)};
        double acc = 0.0;
        for (int q = 0; q < 5; ++q) {
            const Shape s = shape(gx()[q], h);
            double v = 0;
            for (int i = 0; i < 4; ++i) v += s.n[i] * u[i];
            acc += gw()[q] * v * v;
        }
        total += density[e] * acc * h;
    }
    return total;
}

DiscreteForms assemble_forms(const EvenPiecewiseWeight& p, int m, const PlateParams& params,
                             std::size_t n)
{
    if (m < 1) throw InvalidArgument("m must be >= 1");
    if (std::abs(p.ell() - params.ell) > 1e-14 * params.ell)
        throw InvalidArgument("weight and plate disagree on ell");
    DiscreteForms f;
    f.m = m;
    f.params = params;
    f.nodes = mesh_nodes(p, n);
    const std::size_t ne = f.nodes.size() - 1;
    const std::size_t ndof = 2 * f.nodes.size();
    const double mm = static_cast<double>(m) * m, sigma = params.sigma;

    std::vector<Eigen::Triplet<double>> kt, mt;
    kt.reserve(16 * ne);
    mt.reserve(16 * ne);
    f.density.resize(ne);
    for (std::size_t e = 0; e < ne; ++e) {
        const double h = f.nodes[e + 1] - f.nodes[e];
        const double mid = 0.5 * (f.nodes[e] + f.nodes[e + 1]);
        f.density[e] = p(mid);
        double ke[4][4] = {}, me[4][4] = {};
        for (int q = 0; q < 5; ++q) {
            const Shape s = shape(gx()[q], h);
            const double w = gw()[q] * h;
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) {
                    ke[i][j] += w * (s.d2[i] * s.d2[j] + 2 * mm * (1 - sigma) * s.d1[i] * s.d1[j] -
                                     sigma * mm * (s.d2[i] * s.n[j] + s.n[i] * s.d2[j]) +
                                     mm * mm * s.n[i] * s.n[j]);
                    me[i][j] += w * f.density[e] * s.n[i] * s.n[j];
                }
        }
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                kt.emplace_back(2 * e + i, 2 * e + j, ke[i][j]);
                mt.emplace_back(2 * e + i, 2 * e + j, me[i][j]);
            }
    }
    f.K.resize(ndof, ndof);
    f.M.resize(ndof, ndof);
    f.K.setFromTriplets(kt.begin(), kt.end());
    f.M.setFromTriplets(mt.begin(), mt.end());
    return f;
}

EigenPair smallest_eig(const DiscreteForms& forms, double tol, int max_iter)
{
    const EvenSystem es = even_system(forms);
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt;
    factor(llt, es.K, "stiffness");

    Eigen::VectorXd x = Eigen::VectorXd::Zero(es.K.rows());
    for (Eigen::Index i = 0; i < x.size(); i += (i == 0 ? 1 : 2)) x(i) = 1.0;  // values 1, slopes 0
    double lambda = 0.0;
    for (int it = 1; it <= max_iter; ++it) {
        x = llt.solve(es.M * x);
        x /= x.cwiseAbs().maxCoeff();
        const Eigen::VectorXd full = es.P * x;
        const double next = forms.rayleigh(full);
        if (it > 1 && std::abs(next - lambda) <= tol * next) {
            EigenPair ep{next, full, it};
            if (ep.x(forms.nodes.size() - 1) < 0) ep.x = -ep.x;  // dof n is the centre value
            return ep;
        }
        lambda = next;
    }
    throw NonConvergence("FE inverse iteration did not converge");
}

EigenPair second_even_eig(const DiscreteForms& forms, const EigenPair& first, double tol,
                          int max_iter)
{
    const EvenSystem es = even_system(forms);
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt;
    factor(llt, es.K, "stiffness");

    // even coordinates of the first mode: values and slopes right of the centre
    const std::size_t c = (forms.nodes.size() - 1) / 2;
    Eigen::VectorXd x1(es.K.rows());
    x1(0) = first.x(2 * c);
    for (Eigen::Index k = 1; k < x1.size(); k += 2) {
        const std::size_t i = c + 1 + static_cast<std::size_t>(k - 1) / 2;
        x1(k) = first.x(2 * i);
        x1(k + 1) = first.x(2 * i + 1);
    }
    const Eigen::VectorXd Mx1 = es.M * x1;
    const double n1 = x1.dot(Mx1);
    auto deflate = [&](Eigen::VectorXd& v) { v -= (Mx1.dot(v) / n1) * x1; };

    Eigen::VectorXd x(es.K.rows());
    const double ell = forms.params.ell;
    x(0) = 1.0;
    for (Eigen::Index k = 1; k < x.size(); k += 2) {
        const double y = forms.nodes[c + 1 + static_cast<std::size_t>(k - 1) / 2];
        x(k) = std::cos(std::numbers::pi * y / ell);
        x(k + 1) = -std::numbers::pi / ell * std::sin(std::numbers::pi * y / ell);
    }
    deflate(x);
    double lambda = 0.0;
    for (int it = 1; it <= max_iter; ++it) {
        x = llt.solve(es.M * x);
        deflate(x);
        x /= x.cwiseAbs().maxCoeff();
        const double next = forms.rayleigh(es.P * x);
        if (it > 1 && std::abs(next - lambda) <= tol * next) return {next, es.P * x, it};
        lambda = next;
    }
    throw NonConvergence("FE deflated inverse iteration did not converge");
}

std::size_t count_even_eigenvalues_below(const DiscreteForms& forms, double lambda_max)
{
    const EvenSystem es = even_system(forms);
    const Eigen::SparseMatrix<double> A = es.K - lambda_max * es.M;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
    factor(ldlt, A, "shifted stiffness");
    const Eigen::VectorXd d = ldlt.vectorD();
    std::size_t neg = 0;
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        if (d(i) == 0.0) throw FactorizationFailure("shift coincides with a discrete eigenvalue");
        if (d(i) < 0.0) ++neg;
    }
    return neg;
}

std::size_t default_element_count(const EvenPiecewiseWeight& p, int m, const PlateParams& params)
{
    const double vmax = *std::max_element(p.values().begin(), p.values().end());
    const double mm = static_cast<double>(m) * m;
    // fastest branch near lambda ~ m^4: sqrt(m^2 + sqrt(m^4 vmax))
    const double kappa = std::sqrt(mm + mm * std::sqrt(vmax));
    const double target = std::ceil(2.0 * params.ell * kappa / 0.05);
    std::size_t n = static_cast<std::size_t>(std::clamp(target, 16.0, 2000.0));
    n += n % 2;
    return std::max<std::size_t>(n, 2 * p.pieces());
}

FeEstimate fd_first_eigen(const EvenPiecewiseWeight& p, int m, const PlateParams& params,
                          std::size_t n)
{
    if (n == 0) n = default_element_count(p, m, params);
    FeEstimate r;
    r.n = n;
    r.coarse = smallest_eig(assemble_forms(p, m, params, n)).lambda;
    r.fine = smallest_eig(assemble_forms(p, m, params, 2 * n)).lambda;
    r.extrapolated = (16.0 * r.fine - r.coarse) / 15.0;
    return r;
}

ModeFunction fe_mode(const DiscreteForms& forms, const Eigen::VectorXd& x)
{
    const std::size_t nn = forms.nodes.size();
    std::array<std::vector<double>, 4> d;
    for (auto& v : d) v.assign(nn, 0.0);
    std::vector<double> hits(nn, 0.0);
    for (std::size_t i = 0; i < nn; ++i) {
        d[0][i] = x(2 * i);
        d[1][i] = x(2 * i + 1);
    }
    // second and third derivatives are discontinuous; average the element values
    for (std::size_t e = 0; e + 1 < nn; ++e) {
        const double h = forms.nodes[e + 1] - forms.nodes[e];
        const double u[4] = {x(2 * e), x(2 * e + 1), x(2 * e + 2), x(2 * e + 3)};
        for (int side = 0; side < 2; ++side) {
            const Shape s = shape(side, h);
            double d2 = 0, d3 = 0;
            for (int i = 0; i < 4; ++i) {
                d2 += s.d2[i] * u[i];
                d3 += s.d3[i] * u[i];
            }
            d[2][e + side] += d2;
            d[3][e + side] += d3;
            hits[e + side] += 1.0;
        }
    }
    for (std::size_t i = 0; i < nn; ++i) {
        d[2][i] /= hits[i];
        d[3][i] /= hits[i];
    }
    const double c = x(nn - 1) < 0 ? -1.0 : 1.0;  // centre value
    const double scale = c / std::sqrt(forms.mass(x));
    for (auto& v : d)
        for (auto& e : v) e *= scale;
    return ModeFunction::sampled(forms.params, forms.m, ModeFunction::Origin::fe_samples, forms.nodes,
                                 std::move(d));
}

}  // namespace plate
