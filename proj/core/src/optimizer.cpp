#include "plate/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <thread>

#include "plate/errors.hpp"
#include "plate/fe_oracle.hpp"
#include "plate/greens_solver.hpp"
#include "plate/stripe_spectrum.hpp"

namespace plate {

namespace {

double m4(int m) { return std::pow(static_cast<double>(m), 4); }

// Runs f(i) for i in [0, n) on a few worker threads; results keep their index.
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, F&& f)
{
    std::vector<T> out(n);
    const std::size_t workers =
        std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
        return out;
    }
    std::vector<std::future<void>> jobs;
    for (std::size_t w = 0; w < workers; ++w)
        jobs.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = w; i < n; i += workers) out[i] = f(i);
        }));
    for (auto& j : jobs) j.get();
    return out;
}

std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

}  // namespace

const char* to_string(Route r)
{
    switch (r) {
    case Route::unweighted: return "unweighted";
    case Route::stripe: return "stripe";
    case Route::inverse_power: return "inverse_power";
    }
    return "?";
}

double first_even(const EvenPiecewiseWeight& p, int m, const PlateParams& params,
                  const SolverOptions& opts, Route* route)
{
    if (!opts.force_inverse_power) {
        if (auto s = p.as_stripe()) {
            if (route) *route = s->is_unweighted() ? Route::unweighted : Route::stripe;
            ScanOptions so;
            so.rel_tol = opts.tol;
            return first_even_eigenvalue(m, params, *s, so).lambda;
        }
    }
    if (route) *route = Route::inverse_power;
    return inverse_power_first(p, m, params, opts.tol, {opts.green_cells}).lambda;
}

PlateEigenResult plate_first_eigenvalue(const EvenPiecewiseWeight& p, const PlateParams& params,
                                        int m_max, const SolverOptions& opts, bool fe_confirm)
{
    if (m_max < 2) throw InvalidArgument("m_max must be >= 2");
    PlateEigenResult r;
    r.per_m.resize(static_cast<std::size_t>(m_max));
    for (int m = 1; m <= m_max; ++m) r.per_m[m - 1] = first_even(p, m, params, opts, &r.route);
    const auto it = std::min_element(r.per_m.begin(), r.per_m.end());
    r.lambda = *it;
    r.argmin_m = static_cast<int>(it - r.per_m.begin()) + 1;
    r.argmin_is_one = r.argmin_m == 1;
    if (fe_confirm) {
        r.fe_lambda = fd_first_eigen(p, r.argmin_m, params).extrapolated;
        r.fe_relative_gap = std::abs(r.fe_lambda - r.lambda) / r.lambda;
    } else {
        r.fe_lambda = r.fe_relative_gap = std::numeric_limits<double>::quiet_NaN();
    }
    return r;
}

double proven_beta_limit(const PlateParams& params)
{
    const double mu11 = unweighted_first(1, params).lambda;
    return std::min(1.0 / mu11, 16.0 * (1.0 - params.sigma * params.sigma));
}

bool in_proven_regime(double beta, const PlateParams& params)
{
    return beta < proven_beta_limit(params);
}

double XWeight::operator()(double x) const
{
    if (x < 0.0 || x > std::numbers::pi) throw InvalidArgument("x outside [0, pi]");
    return profile(std::min(x, std::numbers::pi - x));
}

EvenPiecewiseWeight x_stripe_profile(double alpha, double beta)
{
    const double half = 0.5 * std::numbers::pi;
    const double s = mass_normalized_interface(alpha, beta, half);
    return EvenPiecewiseWeight({0.0, s, half}, {alpha, beta}, alpha, beta);
}

// ---------------------------------------------------------------------------

namespace {

// Simpson weights for a grid that is uniform on each segment
struct Axis1D {
    std::vector<double> x;
    struct Seg {
        std::size_t first, last;
        double h, weight;
    };
    std::vector<Seg> segs;
};

Axis1D make_axis(std::span<const double> bps, std::size_t cells,
                 const std::function<double(double)>& weight)
{
    const Grid g = Grid::aligned(bps, cells);
    Axis1D a;
    a.x = g.nodes();
    for (const auto& s : g.segments()) {
        const double mid = 0.5 * (a.x[s.first] + a.x[s.last]);
        a.segs.push_back({s.first, s.last, s.h, weight(mid)});
    }
    return a;
}

std::vector<double> simpson_weights(std::size_t n, double h)
{
    std::vector<double> w(n + 1, 0.0);
    const std::size_t ns = n % 2 == 0 ? n : n - 3;
    for (std::size_t i = 0; i + 2 <= ns; i += 2) {
        w[i] += h / 3;
        w[i + 1] += 4 * h / 3;
        w[i + 2] += h / 3;
    }
    if (ns != n) {
        const double c[4] = {1, 3, 3, 1};
        for (int k = 0; k < 4; ++k) w[ns + k] += 3 * h / 8 * c[k];
    }
    return w;
}

}  // namespace

RayleighBound rayleigh_bound_u1(const DirectionalWeight& p, const PlateParams& params,
                                std::size_t nx, std::size_t ny)
{
    const double pi = std::numbers::pi, half = 0.5 * pi;
    const EvenPiecewiseWeight& prof = p.profile;
    const bool along_y = p.axis == DirectionalWeight::Axis::y;
    const double span = along_y ? params.ell : half;
    if (std::abs(prof.ell() - span) > 1e-12 * span)
        throw HypothesisViolation(along_y ? "y-weight must be given on [0, ell]"
                                          : "x-weight profile must be given on [0, pi/2]");
    if (!prof.single_crossing())
        throw HypothesisViolation("weight is not <= 1 up to a crossing point and >= 1 after it");
    if (!prof.mass_normalized())
        throw HypothesisViolation("weight mean over the plate is not 1");

    const SpectralPoint mu = unweighted_first(1, params);
    const ModeFunction phi = unweighted_mode(1, params);

    // y axis over [-ell, ell], x axis over [0, pi]; breakpoints mirrored
    std::vector<double> ybps, xbps;
    if (along_y) {
        auto b = prof.breakpoints();
        for (std::size_t i = b.size(); i-- > 1;) ybps.push_back(-b[i]);
        ybps.insert(ybps.end(), b.begin(), b.end());
        xbps = {0.0, pi};
    } else {
        ybps = {-params.ell, params.ell};
        auto b = prof.breakpoints();
        xbps.assign(b.begin(), b.end());
        for (std::size_t i = b.size() - 1; i-- > 0;) xbps.push_back(pi - b[i]);
    }
    const Axis1D ax = make_axis(xbps, nx, [&](double x) { return along_y ? 1.0 : prof(std::min(x, pi - x)); });
    const Axis1D ay = make_axis(ybps, ny, [&](double y) { return along_y ? prof(y) : 1.0; });

    std::vector<double> f0(ay.x.size()), f1(ay.x.size()), f2(ay.x.size());
    for (std::size_t j = 0; j < ay.x.size(); ++j) {
        f0[j] = phi.derivative(ay.x[j], 0);
        f1[j] = phi.derivative(ay.x[j], 1);
        f2[j] = phi.derivative(ay.x[j], 2);
    }
    std::vector<double> sn(ax.x.size()), cs(ax.x.size());
    for (std::size_t i = 0; i < ax.x.size(); ++i) {
        sn[i] = std::sin(ax.x[i]);
        cs[i] = std::cos(ax.x[i]);
    }

    const double sigma = params.sigma;
    double num = 0.0, den = 0.0;
    for (const auto& sx : ax.segs) {
        const auto wx = simpson_weights(sx.last - sx.first, sx.h);
        for (const auto& sy : ay.segs) {
            const auto wy = simpson_weights(sy.last - sy.first, sy.h);
            const double pw = sx.weight * sy.weight;
            for (std::size_t i = sx.first; i <= sx.last; ++i) {
                for (std::size_t j = sy.first; j <= sy.last; ++j) {
                    const double u = f0[j] * sn[i];
                    const double uxx = -f0[j] * sn[i];
                    const double uyy = f2[j] * sn[i];
                    const double uxy = f1[j] * cs[i];
                    const double lap = uxx + uyy;
                    const double w = wx[i - sx.first] * wy[j - sy.first];
                    num += w * (lap * lap + (1 - sigma) * (2 * uxy * uxy - 2 * uxx * uyy));
                    den += w * pw * u * u;
                }
            }
        }
    }
    RayleighBound r;
    r.mu11 = mu.lambda;
    r.bound = num / den;
    r.ok = r.bound <= r.mu11 * (1 + 1e-8);
    return r;
}

// ---------------------------------------------------------------------------

MonotonicityVerdict pattern_monotonicity_check(const EvenPiecewiseWeight& p1,
                                               const EvenPiecewiseWeight& p2,
                                               const PlateParams& params, int m_max, double tol)
{
    for (const auto* p : {&p1, &p2}) {
        if (std::abs(p->ell() - params.ell) > 1e-14 * params.ell)
            throw HypothesisViolation("weight and plate disagree on ell");
        if (!p->single_crossing())
            throw HypothesisViolation("weight is not <= 1 up to a crossing point and >= 1 after it");
        if (!p->mass_normalized()) throw HypothesisViolation("weight mean over the plate is not 1");
    }
    // p1 - p2 must be <= 0 up to some z and >= 0 after it
    std::vector<double> cuts(p1.breakpoints().begin(), p1.breakpoints().end());
    cuts.insert(cuts.end(), p2.breakpoints().begin(), p2.breakpoints().end());
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    bool seen_positive = false;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
        const double d = p1(mid) - p2(mid);
        if (d > 0) seen_positive = true;
        if (d < 0 && seen_positive)
            throw HypothesisViolation("p1 - p2 changes sign more than once (needs <= 0 then >= 0)");
    }

    SolverOptions opts;
    opts.force_inverse_power = true;
    MonotonicityVerdict v;
    v.lambda1 = plate_first_eigenvalue(p1, params, m_max, opts, false).lambda;
    v.lambda2 = plate_first_eigenvalue(p2, params, m_max, opts, false).lambda;
    v.verdict = v.lambda1 <= v.lambda2 * (1 + tol);
    v.guaranteed = in_proven_regime(std::max(p1.beta(), p2.beta()), params);
    return v;
}

std::optional<EvenPiecewiseWeight> sample_class_weight(double alpha, double beta, double ell,
                                                       std::mt19937_64& rng)
{
    if (!(alpha < 1.0 && beta > 1.0)) throw InvalidArgument("need alpha < 1 < beta");
    std::uniform_int_distribution<int> pieces_d(2, 6);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int k = pieces_d(rng);
    const double c = ell * (0.1 + 0.8 * unit(rng));
    const int inner = std::uniform_int_distribution<int>(1, k - 1)(rng);
    const int outer = k - inner;

    std::vector<double> cut_in(inner - 1), cut_out(outer - 1);
    for (auto& v : cut_in) v = c * unit(rng);
    for (auto& v : cut_out) v = c + (ell - c) * unit(rng);
    std::sort(cut_in.begin(), cut_in.end());
    std::sort(cut_out.begin(), cut_out.end());
    std::vector<double> bps{0.0};
    bps.insert(bps.end(), cut_in.begin(), cut_in.end());
    bps.push_back(c);
    bps.insert(bps.end(), cut_out.begin(), cut_out.end());
    bps.push_back(ell);
    for (std::size_t i = 1; i < bps.size(); ++i)
        if (!(bps[i] > bps[i - 1])) return std::nullopt;

    std::vector<double> vals(static_cast<std::size_t>(k));
    for (int i = 0; i < inner; ++i) vals[i] = alpha + (1.0 - alpha) * unit(rng);
    for (int i = inner; i < k - 1; ++i) vals[i] = 1.0 + (beta - 1.0) * unit(rng);
    double mass = 0.0;
    for (int i = 0; i < k - 1; ++i) mass += vals[i] * (bps[i + 1] - bps[i]);
    const double last = (ell - mass) / (bps[k] - bps[k - 1]);
    if (!(last >= 1.0 && last <= beta)) return std::nullopt;
    vals[k - 1] = last;
    return EvenPiecewiseWeight(std::move(bps), std::move(vals), alpha, beta);
}

ClassMinimumReport verify_class_minimum(double alpha, double beta, const PlateParams& params,
                                        std::size_t n_samples, std::uint64_t seed, double rel_tol,
                                        int m_max)
{
    ClassMinimumReport rep;
    rep.alpha = alpha;
    rep.beta = beta;
    rep.guaranteed = in_proven_regime(beta, params);

    const TwoMaterialWeight bar = TwoMaterialWeight::mass_normalized(alpha, beta, params.ell);
    const EvenPiecewiseWeight pbar = bar.to_piecewise();
    rep.lambda_bar = plate_first_eigenvalue(pbar, params, m_max, {}, false).lambda;
    SolverOptions green;
    green.force_inverse_power = true;
    rep.lambda_bar_green = plate_first_eigenvalue(pbar, params, m_max, green, false).lambda;

    std::mt19937_64 rng(seed);
    std::vector<EvenPiecewiseWeight> draws;
    const std::size_t max_attempts = 1000 * std::max<std::size_t>(n_samples, 1);
    std::size_t attempts = 0;
    while (draws.size() < n_samples && attempts < max_attempts) {
        ++attempts;
        if (auto w = sample_class_weight(alpha, beta, params.ell, rng))
            draws.push_back(std::move(*w));
        else
            ++rep.rejected_draws;
    }
    if (draws.size() < n_samples)
        throw InvalidArgument("could not draw enough mass-normalized weights for alpha=" + fmt(alpha) +
                              " beta=" + fmt(beta));

    const double ref = rep.lambda_bar_green;
    rep.margins = parallel_map<double>(draws.size(), [&](std::size_t i) {
        return plate_first_eigenvalue(draws[i], params, m_max, {}, false).lambda / ref - 1.0;
    });
    rep.min_margin = rep.margins.empty() ? 0.0 : *std::min_element(rep.margins.begin(), rep.margins.end());
    rep.violations = static_cast<std::size_t>(std::count_if(
        rep.margins.begin(), rep.margins.end(), [&](double mg) { return mg < -rel_tol; }));
    return rep;
}

EvenPiecewiseWeight blend_weights(const EvenPiecewiseWeight& a, const EvenPiecewiseWeight& b,
                                  double t)
{
    if (std::abs(a.ell() - b.ell()) > 1e-14 * a.ell()) throw InvalidArgument("weights disagree on ell");
    if (!(t >= 0.0 && t <= 1.0)) throw InvalidArgument("blend parameter must lie in [0, 1]");
    std::vector<double> cuts(a.breakpoints().begin(), a.breakpoints().end());
    cuts.insert(cuts.end(), b.breakpoints().begin(), b.breakpoints().end());
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> bps{cuts.front()};
    for (double c : cuts)
        if (c > bps.back() * (1 + 1e-14) + 1e-300) bps.push_back(c);
    bps.back() = a.ell();
    std::vector<double> vals;
    for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
        const double mid = 0.5 * (bps[i] + bps[i + 1]);
        vals.push_back((1 - t) * a(mid) + t * b(mid));
    }
    return EvenPiecewiseWeight(std::move(bps), std::move(vals), std::min(a.alpha(), b.alpha()),
                               std::max(a.beta(), b.beta()));
}

NestedPairReport verify_nested_pairs(double alpha, double beta, const PlateParams& params,
                                     std::size_t n_pairs, std::uint64_t seed, double rel_tol,
                                     int m_max)
{
    NestedPairReport rep;
    rep.guaranteed = in_proven_regime(beta, params);
    const EvenPiecewiseWeight pbar = TwoMaterialWeight::mass_normalized(alpha, beta, params.ell).to_piecewise();

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> tdist(0.1, 0.9);
    struct Draw {
        EvenPiecewiseWeight p1, p2;
        double t;
    };
    std::vector<Draw> draws;
    const std::size_t max_attempts = 1000 * std::max<std::size_t>(n_pairs, 1);
    std::size_t attempts = 0;
    while (draws.size() < n_pairs && attempts < max_attempts) {
        ++attempts;
        auto p2 = sample_class_weight(alpha, beta, params.ell, rng);
        const double t = tdist(rng);
        if (!p2) {
            ++rep.rejected_draws;
            continue;
        }
        EvenPiecewiseWeight p1 = blend_weights(*p2, pbar, t);
        if (!p1.in_class()) {
            ++rep.rejected_draws;
            continue;
        }
        draws.push_back({std::move(p1), std::move(*p2), t});
    }
    if (draws.size() < n_pairs)
        throw InvalidArgument("could not draw enough nested pairs for alpha=" + fmt(alpha) +
                              " beta=" + fmt(beta));

    rep.pairs = parallel_map<NestedPair>(draws.size(), [&](std::size_t i) {
        return NestedPair{draws[i].t,
                          pattern_monotonicity_check(draws[i].p1, draws[i].p2, params, m_max, rel_tol)};
    });
    rep.violations = static_cast<std::size_t>(std::count_if(
        rep.pairs.begin(), rep.pairs.end(), [](const NestedPair& p) { return !p.verdict.verdict; }));
    return rep;
}

// ---------------------------------------------------------------------------

SweepResult sweep_beta(int m, double alpha, const std::vector<double>& betas,
                       const PlateParams& params)
{
    SweepResult r;
    r.axis = "beta";
    r.points = betas;
    for (std::size_t i = 0; i < betas.size(); ++i) {
        if (!(betas[i] > 1.0)) throw InvalidArgument("sweep betas must exceed 1");
        if (i > 0 && !(betas[i] > betas[i - 1])) throw InvalidArgument("sweep betas must increase");
    }
    const double mu = unweighted_first(m, params).lambda;
    r.lambdas = parallel_map<double>(betas.size(), [&](std::size_t i) {
        const auto w = TwoMaterialWeight::mass_normalized(alpha, betas[i], params.ell);
        return first_even_eigenvalue(m, params, w).lambda;
    });
    r.monotone = true;
    for (std::size_t i = 0; i < betas.size(); ++i) {
        const double l = r.lambdas[i];
        if (i > 0 && !(l < r.lambdas[i - 1])) {
            r.monotone = false;
            r.violations.push_back("not decreasing at beta=" + fmt(betas[i]));
        }
        if (l < m4(m - 1)) r.violations.push_back("below (m-1)^4 at beta=" + fmt(betas[i]));
        if (!(l > m4(m) / betas[i])) r.violations.push_back("not above m^4/beta at beta=" + fmt(betas[i]));
        if (!(l < m4(m))) r.violations.push_back("not below m^4 at beta=" + fmt(betas[i]));
        if (l > mu * (1 + 1e-12)) r.violations.push_back("above mu_{m,1} at beta=" + fmt(betas[i]));
    }
    return r;
}

SweepResult sweep_m(const TwoMaterialWeight& w, int m_max, const PlateParams& params)
{
    if (m_max < 2) throw InvalidArgument("m_max must be >= 2");
    SweepResult r;
    r.axis = "m";
    for (int m = 1; m <= m_max; ++m) r.points.push_back(m);
    r.lambdas = parallel_map<double>(static_cast<std::size_t>(m_max), [&](std::size_t i) {
        return first_even_eigenvalue(static_cast<int>(i) + 1, params, w).lambda;
    });
    r.monotone = true;
    for (std::size_t i = 1; i < r.lambdas.size(); ++i) {
        if (!(r.lambdas[i] > r.lambdas[i - 1])) {
            r.monotone = false;
            r.violations.push_back("not increasing at m=" + std::to_string(i + 1));
        }
    }
    return r;
}

Table1 table1(const PlateParams& params, int m_max, bool fe_check)
{
    Table1 t;
    t.labels = {"p=1", "alpha=0.5,beta=1.5", "alpha=0.5,beta=20"};
    t.weights = {TwoMaterialWeight::unweighted(params.ell),
                 TwoMaterialWeight::mass_normalized(0.5, 1.5, params.ell),
                 TwoMaterialWeight::mass_normalized(0.5, 20.0, params.ell)};
    for (const auto& w : t.weights) {
        std::vector<double> row(static_cast<std::size_t>(m_max)), fe(static_cast<std::size_t>(m_max));
        const auto pw = w.to_piecewise();
        for (int m = 1; m <= m_max; ++m) {
            row[m - 1] = first_even_eigenvalue(m, params, w).lambda;
            fe[m - 1] = fe_check ? fd_first_eigen(pw, m, params).extrapolated
                                 : std::numeric_limits<double>::quiet_NaN();
        }
        t.lambda.push_back(std::move(row));
        t.fe_lambda.push_back(std::move(fe));
    }
    return t;
}

// ---------------------------------------------------------------------------

SublevelReport sublevel_analysis(const std::vector<double>& u2, std::size_t nx, std::size_t ny,
                                 double target_fraction)
{
    if (u2.size() != nx * ny || nx == 0 || ny == 0) throw InvalidArgument("field size mismatch");
    if (!(target_fraction > 0.0 && target_fraction < 1.0))
        throw InvalidArgument("target fraction must lie in (0, 1)");
    const std::size_t n = nx * ny;
    SublevelReport r;
    r.nx = nx;
    r.ny = ny;
    r.target_fraction = target_fraction;

    // the `count` smallest cells, ties broken by index
    const std::size_t count = static_cast<std::size_t>(std::llround(target_fraction * n));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return u2[a] < u2[b]; });
    r.mask.assign(n, 0);
    for (std::size_t k = 0; k < count; ++k) r.mask[order[k]] = 1;
    r.threshold = count ? u2[order[count - 1]] : 0.0;
    r.fraction = static_cast<double>(count) / static_cast<double>(n);

    // best union of whole rows with the same number of rows as the area allows
    std::vector<std::size_t> in_row(ny, 0);
    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i = 0; i < nx; ++i) in_row[j] += r.mask[j * nx + i];
    const std::size_t rows = static_cast<std::size_t>(std::llround(target_fraction * ny));
    std::vector<std::size_t> idx(ny);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return in_row[a] > in_row[b]; });
    std::size_t overlap = 0;
    for (std::size_t k = 0; k < rows; ++k) overlap += in_row[idx[k]];
    const double sym = static_cast<double>(count + rows * nx - 2 * overlap);
    r.sym_diff_fraction = sym / static_cast<double>(n);
    r.differs = r.sym_diff_fraction > 0.01;
    return r;
}

SublevelReport sublevel_report(const TwoMaterialWeight& w, const PlateParams& params, std::size_t nx,
                               std::size_t ny, std::optional<double> fraction)
{
    if (!w.mass_normalized()) throw HypothesisViolation("weight mean over the plate is not 1");
    const double target = fraction ? *fraction : (w.beta() - 1.0) / (w.beta() - w.alpha());
    const SpectralPoint sp = first_even_eigenvalue(1, params, w);
    const ModeFunction phi = mode_function(sp, params, w);
    std::vector<double> u2(nx * ny);
    for (std::size_t j = 0; j < ny; ++j) {
        const double y = -params.ell + (static_cast<double>(j) + 0.5) * 2.0 * params.ell / ny;
        const double py = phi(y);
        for (std::size_t i = 0; i < nx; ++i) {
            const double x = (static_cast<double>(i) + 0.5) * std::numbers::pi / nx;
            const double s = std::sin(x);
            u2[j * nx + i] = py * py * s * s;
        }
    }
    return sublevel_analysis(u2, nx, ny, target);
}

}  // namespace plate
