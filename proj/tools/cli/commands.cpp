#include "cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include "cli/output.hpp"
#include "plate/errors.hpp"
#include "plate/fe_oracle.hpp"
#include "plate/greens_solver.hpp"
#include "plate/optimizer.hpp"
#include "plate/quadrature.hpp"
#include "plate/stripe_spectrum.hpp"

namespace plate::cli {

namespace {

struct Outcome {
    CsvTable csv;
    Json summary = Json::object();
    Verdicts verdicts;
};

double m4(int m) { return std::pow(double(m), 4); }

std::vector<int> int_list(const RunConfig& cfg, const std::string& key)
{
    std::vector<int> out;
    for (double v : cfg.numbers(key)) {
        if (v != std::floor(v) || v < 1 || v > 1000) throw ConfigError(key + ": entries must be integers in [1, 1000]");
        out.push_back(static_cast<int>(v));
    }
    if (out.empty()) throw ConfigError(key + " must not be empty");
    return out;
}

SolverOptions solver_options(const RunConfig& cfg)
{
    SolverOptions o;
    o.tol = cfg.number("solver.tol");
    o.green_cells = static_cast<std::size_t>(cfg.integer("solver.green_cells"));
    return o;
}

// Lower end of the admissible interval for lambda: m^4/beta for a stripe,
// (1 - sigma^2) m^4 for the unweighted plate.
double bracket_lower(int m, double beta, const PlateParams& params)
{
    return beta > 1.0 ? m4(m) / beta : (1 - params.sigma * params.sigma) * m4(m);
}

std::vector<std::string> bracket_header()
{
    return {"m4_over_beta", "m4", "bracket_lower", "within_bracket"};
}

std::vector<std::string> bracket_cells(double lambda, int m, double beta, const PlateParams& params)
{
    const double lo = bracket_lower(m, beta, params);
    return {fmt(m4(m) / beta), fmt(m4(m)), fmt(lo), fmt(lo < lambda && lambda < m4(m))};
}

std::vector<std::string> cat(std::vector<std::string> a, const std::vector<std::string>& b)
{
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

// Accumulates the bound checks shared by every command that emits lambda.
struct BoundTally {
    std::size_t lower = 0, upper = 0, mu = 0, count = 0;
    double lower_margin = std::numeric_limits<double>::infinity();
    double upper_margin = std::numeric_limits<double>::infinity();
    double mu_margin = std::numeric_limits<double>::infinity();
    std::string first_lower, first_upper, first_mu;

    void add(double lambda, int m, double beta, double mu, const PlateParams& params,
             const std::string& where)
    {
        ++count;
        const double lo = bracket_lower(m, beta, params);
        const double ml = lambda / lo - 1, mu_ = 1 - lambda / m4(m), mm = 1 - lambda / mu;
        lower_margin = std::min(lower_margin, ml);
        upper_margin = std::min(upper_margin, mu_);
        mu_margin = std::min(mu_margin, mm);
        if (!(ml > 0) && lower++ == 0) first_lower = where;
        if (!(mu_ > 0) && upper++ == 0) first_upper = where;
        if (!(mm >= -1e-12) && this->mu++ == 0) first_mu = where;
    }

    void report(Verdicts& v) const
    {
        v.check("bracket_lower < lambda", lower == 0, lower_margin,
                lower ? std::to_string(lower) + " violations, first at " + first_lower : "");
        v.check("lambda < m^4", upper == 0, upper_margin,
                upper ? std::to_string(upper) + " violations, first at " + first_upper : "");
        v.check("lambda <= mu_{m,1}", mu == 0, mu_margin,
                mu ? std::to_string(mu) + " violations, first at " + first_mu : "");
    }
};

class MuCache {
public:
    explicit MuCache(PlateParams p) : params_(p) {}
    double operator()(int m)
    {
        auto it = cache_.find(m);
        if (it != cache_.end()) return it->second;
        return cache_[m] = unweighted_first(m, params_).lambda;
    }

private:
    PlateParams params_;
    std::map<int, double> cache_;
};

std::string where(double alpha, double beta, int m)
{
    return "alpha=" + fmt(alpha) + " beta=" + fmt(beta) + " m=" + fmt(m);
}

std::string case_name(double lambda, int m, const TwoMaterialWeight& w)
{
    return w.is_unweighted() ? "unweighted" : to_string(classify_case(lambda, m, w));
}

// ---------------------------------------------------------------------------

Outcome cmd_table1(const RunConfig& cfg)
{
    const PlateParams params = cfg.plate();
    const int m_max = static_cast<int>(cfg.integer("solver.m_max"));
    Outcome o{CsvTable(cat({"row", "alpha", "beta", "m", "lambda", "fe_lambda", "fe_rel_gap", "case", "mu"},
                           bracket_header())),
              {}, {}};
    const Table1 t = table1(params, m_max, true);
    MuCache mu(params);
    BoundTally bounds;
    double worst_fe = 0.0;
    bool increasing = true;
    for (std::size_t r = 0; r < t.weights.size(); ++r) {
        const auto& w = t.weights[r];
        for (int m = 1; m <= m_max; ++m) {
            const double l = t.lambda[r][m - 1], fe = t.fe_lambda[r][m - 1];
            const double gap = std::abs(fe - l) / l;
            worst_fe = std::max(worst_fe, gap);
            if (m > 1 && !(l > t.lambda[r][m - 2])) increasing = false;
            bounds.add(l, m, w.beta(), mu(m), params, where(w.alpha(), w.beta(), m));
            std::string label = t.labels[r];
            std::replace(label.begin(), label.end(), ',', ' ');
            o.csv.add(cat({label, fmt(w.alpha()), fmt(w.beta()), fmt(m), fmt(l), fmt(fe), fmt(gap),
                           case_name(l, m, w), fmt(mu(m))},
                          bracket_cells(l, m, w.beta(), params)));
        }
    }
    o.verdicts.check("fe agreement <= 1e-5", worst_fe <= 1e-5, 1e-5 - worst_fe);
    o.verdicts.check("rows increasing in m", increasing, 0.0);
    bounds.report(o.verdicts);
    o.summary["max_fe_rel_gap"] = worst_fe;
    return o;
}

Outcome cmd_spectrum(const RunConfig& cfg)
{
    const PlateParams params = cfg.plate();
    const auto ms = int_list(cfg, "spectrum.m");
    const std::string kind = cfg.weight_kind();
    const SolverOptions opts = solver_options(cfg);
    Outcome o{CsvTable(cat({"m", "index", "lambda", "case", "route", "mu"}, bracket_header())), {}, {}};
    MuCache mu(params);
    BoundTally bounds;
    bool ascending = true;
    const EvenPiecewiseWeight pw = cfg.weight();
    for (int m : ms) {
        std::vector<double> lambdas;
        std::vector<std::string> cases;
        std::string route;
        if (kind == "piecewise" || cfg.text("spectrum.lambda_max") == "auto") {
            Route r{};
            lambdas.push_back(first_even(pw, m, params, opts, &r));
            route = to_string(r);
            if (auto s = pw.as_stripe())
                cases.push_back(case_name(lambdas.back(), m, *s));
            else
                cases.push_back("-");
        } else {
            const TwoMaterialWeight w = cfg.stripe();
            if (w.is_unweighted()) throw ConfigError("spectrum.lambda_max needs a two-material weight");
            for (const auto& sp : even_eigenvalues_below(m, params, w, cfg.number("spectrum.lambda_max"))) {
                lambdas.push_back(sp.lambda);
                cases.push_back(to_string(sp.case_tag));
            }
            route = to_string(Route::stripe);
        }
        for (std::size_t i = 0; i < lambdas.size(); ++i) {
            if (i > 0 && !(lambdas[i] > lambdas[i - 1])) ascending = false;
            // only the first even eigenvalue is bracketed
            if (i == 0) bounds.add(lambdas[i], m, pw.beta(), mu(m), params, where(pw.alpha(), pw.beta(), m));
            o.csv.add(cat({fmt(m), fmt(i + 1), fmt(lambdas[i]), cases[i], route, fmt(mu(m))},
                          bracket_cells(lambdas[i], m, pw.beta(), params)));
        }
        if (lambdas.empty()) o.verdicts.check("eigenvalue found for m=" + fmt(m), false, 0.0);
    }
    o.verdicts.check("even eigenvalues simple and ascending", ascending, 0.0);
    bounds.report(o.verdicts);
    return o;
}

std::vector<double> sweep_betas(const RunConfig& cfg)
{
    std::vector<double> betas = cfg.numbers("sweep.betas");
    if (!betas.empty()) return betas;
    const double bmax = cfg.number("sweep.beta_max");
    const long n = cfg.integer("sweep.points");
    for (long i = 1; i <= n; ++i) betas.push_back(1.0 + (bmax - 1.0) * double(i) / double(n));
    return betas;
}

Outcome cmd_sweep_beta(const RunConfig& cfg)
{
    const PlateParams params = cfg.plate();
    const double alpha = cfg.number("weight.alpha");
    if (!(alpha > 0 && alpha < 1)) throw ConfigError("sweep-beta needs 0 < weight.alpha < 1");
    const auto betas = sweep_betas(cfg);
    Outcome o{CsvTable(cat({"m", "alpha", "beta", "lambda", "case", "floor_m_minus_1_4"}, bracket_header())),
              {}, {}};
    MuCache mu(params);
    BoundTally bounds;
    for (int m : int_list(cfg, "sweep.m")) {
        SweepResult r;
        try {
            r = sweep_beta(m, alpha, betas, params);
        } catch (const InvalidArgument& e) {
            throw ConfigError(e.what());
        }
        for (std::size_t i = 0; i < betas.size(); ++i) {
            const auto w = TwoMaterialWeight::mass_normalized(alpha, betas[i], params.ell);
            bounds.add(r.lambdas[i], m, betas[i], mu(m), params, where(alpha, betas[i], m));
            o.csv.add(cat({fmt(m), fmt(alpha), fmt(betas[i]), fmt(r.lambdas[i]), case_name(r.lambdas[i], m, w),
                           fmt(m4(m - 1))},
                          bracket_cells(r.lambdas[i], m, betas[i], params)));
        }
        std::string detail;
        for (const auto& v : r.violations) detail += (detail.empty() ? "" : "; ") + v;
        o.verdicts.check("m=" + fmt(m) + " strictly decreasing in beta", r.monotone, 0.0);
        o.verdicts.check("m=" + fmt(m) + " no bound violations", r.violations.empty(),
                         -double(r.violations.size()), detail);
        o.summary["violations_m" + fmt(m)] = r.violations;
    }
    bounds.report(o.verdicts);
    return o;
}

Outcome cmd_sweep_m(const RunConfig& cfg)
{
    const PlateParams params = cfg.plate();
    const TwoMaterialWeight w = cfg.stripe();
    const int m_max = static_cast<int>(cfg.integer("solver.m_max"));
    Outcome o{CsvTable(cat({"m", "alpha", "beta", "lambda", "case", "mu"}, bracket_header())), {}, {}};
    const SweepResult r = sweep_m(w, m_max, params);
    const PlateEigenResult pe = plate_first_eigenvalue(w.to_piecewise(), params, m_max, solver_options(cfg));
    MuCache mu(params);
    BoundTally bounds;
    for (int m = 1; m <= m_max; ++m) {
        const double l = r.lambdas[m - 1];
        bounds.add(l, m, w.beta(), mu(m), params, where(w.alpha(), w.beta(), m));
        o.csv.add(cat({fmt(m), fmt(w.alpha()), fmt(w.beta()), fmt(l), case_name(l, m, w), fmt(mu(m))},
                      bracket_cells(l, m, w.beta(), params)));
    }
    std::string detail;
    for (const auto& v : r.violations) detail += (detail.empty() ? "" : "; ") + v;
    o.verdicts.check("strictly increasing in m", r.monotone, 0.0, detail);
    o.verdicts.check("argmin over m is 1", pe.argmin_is_one, 0.0, "argmin m=" + fmt(pe.argmin_m));
    o.verdicts.check("fe confirmation <= 1e-5", pe.fe_relative_gap <= 1e-5, 1e-5 - pe.fe_relative_gap);
    bounds.report(o.verdicts);
    o.summary["lambda_1"] = pe.lambda;
    o.summary["argmin_m"] = pe.argmin_m;
    o.summary["route"] = to_string(pe.route);
    o.summary["fe_lambda"] = pe.fe_lambda;
    return o;
}

Outcome cmd_verify_min(const RunConfig& cfg)
{
    const PlateParams params = cfg.plate();
    const TwoMaterialWeight w = cfg.stripe();
    if (!(w.alpha() < 1 && w.beta() > 1)) throw ConfigError("verify-min needs weight.alpha < 1 < weight.beta");
    const double tol = cfg.number("verify.tol");
    const int m_max = static_cast<int>(cfg.integer("verify.m_max"));
    if (m_max < 2) throw ConfigError("verify.m_max must be >= 2");
    const auto seed = cfg.seed();
    Outcome o{CsvTable({"kind", "index", "lambda", "lambda_ref", "margin", "pass"}), {}, {}};

    const ClassMinimumReport rep = verify_class_minimum(
        w.alpha(), w.beta(), params, static_cast<std::size_t>(cfg.integer("verify.samples")), seed, tol, m_max);
    for (std::size_t i = 0; i < rep.margins.size(); ++i) {
        const double mg = rep.margins[i];
        o.csv.row(std::string("sample"), i, rep.lambda_bar_green * (1 + mg), rep.lambda_bar_green, mg, mg >= -tol);
    }
    const NestedPairReport pairs = verify_nested_pairs(
        w.alpha(), w.beta(), params, static_cast<std::size_t>(cfg.integer("verify.pairs")),
        seed ^ 0x9e3779b97f4a7c15ULL, tol, m_max);
    double pair_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pairs.pairs.size(); ++i) {
        const auto& v = pairs.pairs[i].verdict;
        const double mg = v.lambda2 / v.lambda1 - 1;
        pair_margin = std::min(pair_margin, mg);
        o.csv.row(std::string("pair"), i, v.lambda1, v.lambda2, mg, v.verdict);
    }

    const std::string label = rep.guaranteed ? "" : " [evidence: beta outside the proven regime]";
    o.verdicts.check("class samples >= lambda(pbar)" + label, rep.violations == 0,
                     rep.margins.empty() ? 0.0 : rep.min_margin + tol,
                     std::to_string(rep.violations) + " violations");
    o.verdicts.check("nested pairs ordered" + label, pairs.violations == 0,
                     pairs.pairs.empty() ? 0.0 : pair_margin + tol,
                     std::to_string(pairs.violations) + " violations");
    const double stripe_gap = std::abs(rep.lambda_bar - rep.lambda_bar_green) / rep.lambda_bar;
    o.verdicts.check("stripe solver vs inverse power <= 1e-6", stripe_gap <= 1e-6, 1e-6 - stripe_gap);

    MuCache mu(params);
    BoundTally bounds;
    bounds.add(rep.lambda_bar, 1, w.beta(), mu(1), params, where(w.alpha(), w.beta(), 1));
    bounds.report(o.verdicts);

    o.summary["mode"] = rep.guaranteed ? "theorem" : "conjecture";
    o.summary["proven_beta_limit"] = proven_beta_limit(params);
    o.summary["lambda_bar"] = rep.lambda_bar;
    o.summary["lambda_bar_inverse_power"] = rep.lambda_bar_green;
    const auto b = bracket(rep.lambda_bar, 1, w.beta());
    o.summary["bracket"] = {{"m4_over_beta", b.m4_over_beta}, {"m4", b.m4}, {"within_bracket", b.within}};
    o.summary["min_margin"] = rep.min_margin;
    o.summary["sample_violations"] = rep.violations;
    o.summary["rejected_draws"] = rep.rejected_draws;
    o.summary["pair_violations"] = pairs.violations;
    o.summary["pair_rejected_draws"] = pairs.rejected_draws;
    return o;
}

// ---------------------------------------------------------------------------

struct LinearForcing {
    std::vector<double> knots;   // on [-1, 1]
    std::vector<double> values;  // >= 0
    double operator()(double s) const
    {
        auto it = std::upper_bound(knots.begin(), knots.end(), s);
        std::size_t j = static_cast<std::size_t>(std::clamp<long>(it - knots.begin(), 1, long(knots.size()) - 1));
        const double t = (s - knots[j - 1]) / (knots[j] - knots[j - 1]);
        return (1 - t) * values[j - 1] + t * values[j];
    }
};

LinearForcing random_forcing(std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> count(2, 8);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int k = count(rng);
    LinearForcing f;
    f.knots = {-1.0, 1.0};
    for (int i = 0; i < k - 2; ++i) f.knots.push_back(-1.0 + 2.0 * unit(rng));
    std::sort(f.knots.begin(), f.knots.end());
    f.knots.erase(std::unique(f.knots.begin(), f.knots.end()), f.knots.end());
    for (std::size_t i = 0; i < f.knots.size(); ++i) f.values.push_back(unit(rng) < 0.25 ? 0.0 : unit(rng));
    if (std::all_of(f.values.begin(), f.values.end(), [](double v) { return v == 0.0; })) f.values[0] = 1.0;
    return f;
}

// max over cells of |w3(b) - w3(a) - int_a^b (2 m^2 w2 - m^4 w + f)| / (b - a), with
// wk the k-th derivative, relative to max |f|. Cells never straddle a kink of f, so
// the trapezoid rule keeps this second order where a pointwise difference is not.
double strong_residual(const LmSolution& sol, const SampledFunction& f, int m)
{
    const auto& y = sol.w.nodes();
    const auto& d0 = sol.w.nodal(0);
    const auto& d2 = sol.w.nodal(2);
    const auto& d3 = sol.w.nodal(3);
    const double mm = double(m) * m;
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < y.size(); ++i) {
        const double h = y[i + 1] - y[i];
        const double ga = 2 * mm * d2[i] - mm * mm * d0[i] + f.right()[i];
        const double gb = 2 * mm * d2[i + 1] - mm * mm * d0[i + 1] + f.left()[i + 1];
        worst = std::max(worst, std::abs(d3[i + 1] - d3[i] - 0.5 * h * (ga + gb)) / h);
    }
    return worst / f.max_abs();
}

Outcome cmd_ppp_demo(const RunConfig& cfg)
{
    const double sigma = cfg.number("plate.sigma");
    const auto ells = cfg.numbers("ppp.ells");
    if (ells.empty()) throw ConfigError("ppp.ells must not be empty");
    const long n = cfg.integer("ppp.samples");
    const int m_max = static_cast<int>(cfg.integer("ppp.m_max"));
    const auto cells = static_cast<std::size_t>(cfg.integer("ppp.cells"));
    std::mt19937_64 rng(cfg.seed());
    std::vector<LinearForcing> forcings;
    for (long i = 0; i < n; ++i) forcings.push_back(random_forcing(rng));

    Outcome o{CsvTable({"index", "ell", "m", "knots", "min_w", "positive", "c1", "c2", "c3", "c4", "signs_ok",
                        "homogeneous_zeros", "residual"}),
              {}, {}};
    std::size_t neg = 0, bad_signs = 0, bad_res = 0;
    double min_w = std::numeric_limits<double>::infinity(), worst_res = 0.0, sign_margin = 1.0;
    for (long i = 0; i < n; ++i) {
        const int m = 1 + static_cast<int>(i % m_max);
        for (double ell : ells) {
            PlateParams params;
            try {
                params = make_plate(ell, sigma);
            } catch (const InvalidArgument& e) {
                throw ConfigError(std::string("ppp.ells: ") + e.what());
            }
            const auto& fi = forcings[i];
            std::vector<double> bps;
            for (double k : fi.knots) bps.push_back(k * ell);
            const SampledFunction f = SampledFunction::from_function(
                Grid::aligned(bps, cells), [&](double y) { return fi(y / ell); });
            const PppResult r = ppp_check(f, m, params);
            const LmSolution sol = solve_Lm(f, m, params);
            const double res = strong_residual(sol, f, m);
            const auto& c = r.coeffs;
            const bool signs = c.c1 > 0 && c.c4 < 0 && std::abs(c.c3) < std::abs(c.c4);
            sign_margin = std::min({sign_margin, c.c1 > 0 ? 1.0 : -1.0, c.c4 < 0 ? 1.0 : -1.0,
                                    1 - std::abs(c.c3) / std::abs(c.c4)});
            neg += !r.positive;
            bad_signs += !signs;
            bad_res += !(res < 1e-4);
            min_w = std::min(min_w, r.min_w);
            worst_res = std::max(worst_res, res);
            o.csv.row(i, ell, m, fi.knots.size(), r.min_w, r.positive, c.c1, c.c2, c.c3, c.c4, signs,
                      r.homogeneous_zeros, res);
        }
    }
    o.verdicts.check("min_w > 0", neg == 0, min_w, std::to_string(neg) + " cases");
    o.verdicts.check("c1 > 0, c4 < 0, |c3| < |c4|", bad_signs == 0, sign_margin,
                     std::to_string(bad_signs) + " cases");
    o.verdicts.check("strong residual < 1e-4", bad_res == 0, 1e-4 - worst_res, std::to_string(bad_res) + " cases");
    o.summary["min_w"] = min_w;
    o.summary["max_residual"] = worst_res;
    o.summary["cases"] = n * static_cast<long>(ells.size());
    return o;
}

// ---------------------------------------------------------------------------

Outcome cmd_crosscheck(const RunConfig& cfg)
{
    const double sigma = cfg.number("plate.sigma");
    const auto ms = int_list(cfg, "crosscheck.m");
    const auto ells = cfg.numbers("crosscheck.ells");
    const double ip_tol = cfg.number("crosscheck.ip_tol"), fe_tol = cfg.number("crosscheck.fe_tol");
    const double tol = cfg.number("solver.tol");
    const GreenOptions green{static_cast<std::size_t>(cfg.integer("solver.green_cells")), 10000};
    const auto fe_n = static_cast<std::size_t>(cfg.integer("solver.fe_elements"));

    std::vector<std::pair<double, double>> pairs;
    {
        std::istringstream is(cfg.text("crosscheck.pairs"));
        std::string item;
        while (std::getline(is, item, ',')) {
            const auto colon = item.find(':');
            if (colon == std::string::npos) throw ConfigError("crosscheck.pairs entries look like alpha:beta");
            pairs.emplace_back(parse_number(item.substr(0, colon)), parse_number(item.substr(colon + 1)));
        }
    }

    Outcome o{CsvTable(cat({"ell", "alpha", "beta", "m", "secular", "inverse_power", "fe_extrapolated", "rel_ip",
                            "rel_fe", "case", "mu"},
                           bracket_header())),
              {}, {}};
    BoundTally bounds;
    double worst_ip = 0.0, worst_fe = 0.0;
    std::string at_ip, at_fe;
    for (double ell : ells) {
        PlateParams params;
        try {
            params = make_plate(ell, sigma);
        } catch (const InvalidArgument& e) {
            throw ConfigError(std::string("crosscheck.ells: ") + e.what());
        }
        MuCache mu(params);
        for (const auto& [a, b] : pairs) {
            TwoMaterialWeight w = TwoMaterialWeight::unweighted(ell);
            if (!(a == 1.0 && b == 1.0)) {
                if (!(a < 1 && b > 1)) throw ConfigError("crosscheck.pairs need alpha < 1 < beta or 1:1");
                w = TwoMaterialWeight::mass_normalized(a, b, ell);
            }
            const EvenPiecewiseWeight pw = w.to_piecewise();
            for (int m : ms) {
                const SpectralPoint sp = first_even_eigenvalue(m, params, w);
                const double ip = inverse_power_first(pw, m, params, tol, green).lambda;
                const double fe = fd_first_eigen(pw, m, params, fe_n).extrapolated;
                const double rip = std::abs(ip - sp.lambda) / sp.lambda;
                const double rfe = std::abs(fe - sp.lambda) / sp.lambda;
                const std::string here = "ell=" + fmt(ell) + " " + where(a, b, m);
                if (rip > worst_ip) worst_ip = rip, at_ip = here;
                if (rfe > worst_fe) worst_fe = rfe, at_fe = here;
                bounds.add(sp.lambda, m, w.beta(), mu(m), params, here);
                o.csv.add(cat({fmt(ell), fmt(a), fmt(b), fmt(m), fmt(sp.lambda), fmt(ip), fmt(fe), fmt(rip), fmt(rfe),
                               to_string(sp.case_tag), fmt(mu(m))},
                              bracket_cells(sp.lambda, m, w.beta(), params)));
            }
        }
    }
    o.verdicts.check("secular vs inverse power <= " + fmt(ip_tol), worst_ip <= ip_tol, ip_tol - worst_ip,
                     "worst at " + at_ip);
    o.verdicts.check("secular vs extrapolated FE <= " + fmt(fe_tol), worst_fe <= fe_tol, fe_tol - worst_fe,
                     "worst at " + at_fe);
    bounds.report(o.verdicts);
    o.summary["max_rel_ip"] = worst_ip;
    o.summary["max_rel_fe"] = worst_fe;
    return o;
}

// ---------------------------------------------------------------------------

Outcome cmd_mode(const RunConfig& cfg)
{
    const PlateParams params = cfg.plate();
    const std::string kind = cfg.weight_kind();
    const EvenPiecewiseWeight pw = cfg.weight();
    const int m = static_cast<int>(cfg.integer("solver.m"));
    const long points = cfg.integer("mode.points");
    if (points < 3) throw ConfigError("mode.points must be >= 3");

    double lambda = 0.0;
    std::string route;
    std::optional<ModeFunction> phi;
    if (kind == "piecewise" && !pw.as_stripe()) {
        auto r = inverse_power_first(pw, m, params, cfg.number("solver.tol"),
                                     {static_cast<std::size_t>(cfg.integer("solver.green_cells")), 10000});
        lambda = r.lambda;
        phi = r.phi;
        route = to_string(Route::inverse_power);
    } else {
        const TwoMaterialWeight w = kind == "piecewise" ? *pw.as_stripe() : cfg.stripe();
        const SpectralPoint sp = first_even_eigenvalue(m, params, w);
        lambda = sp.lambda;
        phi = mode_function(sp, params, w);
        route = to_string(w.is_unweighted() ? Route::unweighted : Route::stripe);
    }

    Outcome o{CsvTable({"y", "phi", "dphi", "d2phi", "d3phi", "p"}), {}, {}};
    double min_phi = std::numeric_limits<double>::infinity(), max_phi = 0.0, asym = 0.0;
    double rise = std::numeric_limits<double>::infinity();
    double prev = 0.0;
    for (long i = 0; i < points; ++i) {
        const double y = -params.ell + 2.0 * params.ell * double(i) / double(points - 1);
        const double v = (*phi)(y);
        min_phi = std::min(min_phi, v);
        max_phi = std::max(max_phi, std::abs(v));
        asym = std::max(asym, std::abs(v - (*phi)(-y)));
        if (y > 0 && i > 0 && 2 * i >= points) rise = std::min(rise, v - prev);
        prev = v;
        o.csv.row(y, v, phi->derivative(y, 1), phi->derivative(y, 2), phi->derivative(y, 3), pw(y));
    }
    const Grid g = Grid::mirrored(pw.breakpoints(), 4000);
    const double norm = SampledFunction::from_function(g, [&](double y) {
                            const double v = (*phi)(y);
                            return pw(y) * v * v;
                        }).integral();

    // second even eigenvalue from the FE oracle on a refined mesh
    const DiscreteForms forms = assemble_forms(pw, m, params, 2 * default_element_count(pw, m, params));
    const EigenPair e1 = smallest_eig(forms);
    const EigenPair e2 = second_even_eig(forms, e1);
    const double gap = e2.lambda - lambda;

    const bool proven = in_proven_regime(pw.beta(), params);
    o.verdicts.check("phi > 0 on [-ell, ell]", min_phi > 0, min_phi / max_phi);
    o.verdicts.check("phi even", asym <= 1e-9 * max_phi, 1e-9 - asym / max_phi);
    o.verdicts.check("integral p phi^2 = 1", std::abs(norm - 1) <= 1e-8, 1e-8 - std::abs(norm - 1));
    o.verdicts.check("second even eigenvalue above the first", gap > 0, gap / lambda);
    if (proven)
        o.verdicts.check("phi increasing on (0, ell)", rise > 0, rise / max_phi);
    o.summary["increasing_on_half"] = rise > 0;
    o.summary["increasing_asserted"] = proven;

    MuCache mu(params);
    BoundTally bounds;
    bounds.add(lambda, m, pw.beta(), mu(m), params, where(pw.alpha(), pw.beta(), m));
    bounds.report(o.verdicts);

    o.summary["m"] = m;
    o.summary["lambda"] = lambda;
    o.summary["route"] = route;
    o.summary["origin"] = to_string(phi->origin());
    const double lo = bracket_lower(m, pw.beta(), params);
    o.summary["bracket"] = {{"m4_over_beta", m4(m) / pw.beta()}, {"m4", m4(m)}, {"bracket_lower", lo},
                            {"within_bracket", lo < lambda && lambda < m4(m)}};
    o.summary["lambda2_even_fe"] = e2.lambda;
    o.summary["norm"] = norm;
    return o;
}

Outcome cmd_sublevel(const RunConfig& cfg)
{
    const PlateParams params = cfg.plate();
    const TwoMaterialWeight w = cfg.stripe();
    const auto nx = static_cast<std::size_t>(cfg.integer("sublevel.nx"));
    const auto ny = static_cast<std::size_t>(cfg.integer("sublevel.ny"));
    std::optional<double> fraction;
    if (cfg.text("sublevel.fraction") != "auto") fraction = cfg.number("sublevel.fraction");
    const SublevelReport r = sublevel_report(w, params, nx, ny, fraction);

    Outcome o{CsvTable({"ix", "iy", "x", "y", "in_s"}), {}, {}};
    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i = 0; i < nx; ++i)
            o.csv.row(i, j, (double(i) + 0.5) * std::numbers::pi / double(nx),
                      -params.ell + (double(j) + 0.5) * 2.0 * params.ell / double(ny), int(r.mask[j * nx + i]));
    const double cell = 1.0 / double(nx * ny);
    const double off = std::abs(r.fraction - r.target_fraction);
    o.verdicts.check("|S| matches target within one cell", off <= cell, cell - off);
    o.verdicts.check("S differs from every equal-area stripe by > 1%", r.differs, r.sym_diff_fraction - 0.01);
    o.summary["threshold"] = r.threshold;
    o.summary["target_fraction"] = r.target_fraction;
    o.summary["fraction"] = r.fraction;
    o.summary["sym_diff_fraction"] = r.sym_diff_fraction;
    return o;
}

using Handler = std::function<Outcome(const RunConfig&)>;

const std::map<std::string, Handler>& handlers()
{
    static const std::map<std::string, Handler> h{
        {"table1", cmd_table1},       {"spectrum", cmd_spectrum},     {"sweep-beta", cmd_sweep_beta},
        {"sweep-m", cmd_sweep_m},     {"verify-min", cmd_verify_min}, {"ppp-demo", cmd_ppp_demo},
        {"crosscheck", cmd_crosscheck}, {"mode", cmd_mode},           {"sublevel", cmd_sublevel},
    };
    return h;
}

}  // namespace

const std::vector<std::string>& command_names()
{
    static const std::vector<std::string> names{"table1",   "spectrum",   "sweep-beta", "sweep-m", "verify-min",
                                                "ppp-demo", "crosscheck", "mode",       "sublevel"};
    return names;
}

int run(const std::string& command, const RunConfig& config, const std::filesystem::path& out,
        std::ostream& err)
{
    const auto it = handlers().find(command);
    if (it == handlers().end()) {
        err << "unknown command '" << command << "'\n";
        return 2;
    }
    const auto t0 = std::chrono::steady_clock::now();
    std::optional<Outcome> result;
    try {
        config.validate();
        result = it->second(config);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const HypothesisViolation& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        err << "invariant violated: solver failure: " << e.what() << '\n';
        return 1;
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::error_code ec;
    std::filesystem::create_directories(out, ec);
    if (ec) {
        err << "cannot create output directory " << out << ": " << ec.message() << '\n';
        return 2;
    }
    result->csv.write(out / (command + ".csv"));

    Json j;
    j["command"] = command;
    j["status"] = result->verdicts.all_pass() ? "pass" : "fail";
    Json cfg_json = Json::object();
    for (const auto& [k, v] : config.entries()) cfg_json[k] = v;
    j["config"] = cfg_json;
    j["verdicts"] = result->verdicts.to_json();
    j["results"] = result->summary;
    j["rows"] = result->csv.rows();
    j["runtime_seconds"] = seconds;
    write_json(out / (command + ".json"), j);

    if (!result->verdicts.all_pass()) {
        for (const auto& f : result->verdicts.failures()) err << "invariant violated: " << f << '\n';
        return 1;
    }
    return 0;
}

}  // namespace plate::cli
