#include "cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <numbers>
#include <sstream>

#include "plate/errors.hpp"

namespace plate::cli {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double plain_number(const std::string& s)
{
    const std::string t = trim(s);
    if (t.empty()) throw ConfigError("empty number");
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &used);
    } catch (const std::exception&) {
        throw ConfigError("not a number: '" + t + "'");
    }
    if (used != t.size()) throw ConfigError("not a number: '" + t + "'");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(trim(cur));
    return out;
}

}  // namespace

double parse_number(const std::string& raw)
{
    std::string s = trim(raw);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    const auto p = s.find("pi");
    if (p == std::string::npos) return plain_number(s);
    std::string before = trim(s.substr(0, p));
    std::string after = trim(s.substr(p + 2));
    double v = std::numbers::pi;
    if (!before.empty()) {
        if (before.back() != '*') throw ConfigError("cannot parse '" + raw + "'");
        before.pop_back();
        v *= plain_number(before);
    }
    if (!after.empty()) {
        if (after.front() != '/') throw ConfigError("cannot parse '" + raw + "'");
        const double d = plain_number(after.substr(1));
        if (d == 0.0) throw ConfigError("division by zero in '" + raw + "'");
        v /= d;
    }
    return v;
}

RunConfig::RunConfig()
    : values_{
          {"plate.ell", "pi/150"},
          {"plate.sigma", "0.2"},
          {"weight.kind", "stripe"},
          {"weight.alpha", "0.5"},
          {"weight.beta", "1.5"},
          {"weight.z", "auto"},
          {"weight.breakpoints", ""},
          {"weight.values", ""},
          {"solver.m", "1"},
          {"solver.m_max", "10"},
          {"solver.tol", "1e-13"},
          {"solver.green_cells", "4096"},
          {"solver.fe_elements", "0"},
          {"spectrum.m", "1"},
          {"spectrum.lambda_max", "auto"},
          {"sweep.m", "1,2"},
          {"sweep.betas", ""},
          {"sweep.beta_max", "50"},
          {"sweep.points", "20"},
          {"verify.samples", "200"},
          {"verify.pairs", "50"},
          {"verify.m_max", "3"},
          {"verify.tol", "1e-9"},
          {"ppp.samples", "100"},
          {"ppp.m_max", "10"},
          {"ppp.ells", "pi/150,0.5"},
          {"ppp.cells", "4096"},
          {"crosscheck.m", "1,2,5"},
          {"crosscheck.ells", "pi/150,0.5"},
          {"crosscheck.pairs", "1:1,0.5:1.5,0.5:20,0.9:1.04"},
          {"crosscheck.ip_tol", "1e-6"},
          {"crosscheck.fe_tol", "1e-5"},
          {"mode.points", "201"},
          {"sublevel.nx", "256"},
          {"sublevel.ny", "256"},
          {"sublevel.fraction", "auto"},
          {"run.seed", "1"},
      }
{
}

void RunConfig::load_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    parse_text(os.str(), path.string());
}

void RunConfig::parse_text(const std::string& text, const std::string& origin)
{
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
        set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

void RunConfig::set(const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError("override must look like key=value: " + assignment);
    set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void RunConfig::set(const std::string& key, const std::string& value)
{
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("unknown config key '" + key + "'");
    it->second = value;
}

std::string RunConfig::text(const std::string& key) const
{
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("unknown config key '" + key + "'");
    return it->second;
}

double RunConfig::number(const std::string& key) const
{
    try {
        return parse_number(text(key));
    } catch (const ConfigError& e) {
        throw ConfigError(key + ": " + e.what());
    }
}

long RunConfig::integer(const std::string& key) const
{
    const std::string t = text(key);
    long v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size())
        throw ConfigError(key + ": not an integer: '" + t + "'");
    return v;
}

std::vector<double> RunConfig::numbers(const std::string& key) const
{
    std::vector<double> out;
    const std::string t = text(key);
    if (trim(t).empty()) return out;
    for (const auto& part : split(t, ',')) {
        try {
            out.push_back(parse_number(part));
        } catch (const ConfigError& e) {
            throw ConfigError(key + ": " + e.what());
        }
    }
    return out;
}

std::uint64_t RunConfig::seed() const
{
    const std::string t = text("run.seed");
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size())
        throw ConfigError("run.seed: not an unsigned integer: '" + t + "'");
    return v;
}

PlateParams RunConfig::plate() const
{
    try {
        return make_plate(number("plate.ell"), number("plate.sigma"));
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("plate: ") + e.what());
    }
}

std::string RunConfig::weight_kind() const
{
    const std::string k = text("weight.kind");
    if (k != "unweighted" && k != "stripe" && k != "piecewise")
        throw ConfigError("weight.kind must be unweighted, stripe or piecewise, got '" + k + "'");
    return k;
}

TwoMaterialWeight RunConfig::stripe() const
{
    const PlateParams p = plate();
    const std::string kind = weight_kind();
    try {
        if (kind == "unweighted") return TwoMaterialWeight::unweighted(p.ell);
        if (kind != "stripe") throw ConfigError("this command needs weight.kind = stripe or unweighted");
        const double a = number("weight.alpha"), b = number("weight.beta");
        if (a == 1.0 && b == 1.0) return TwoMaterialWeight::unweighted(p.ell);
        if (text("weight.z") == "auto") return TwoMaterialWeight::mass_normalized(a, b, p.ell);
        return TwoMaterialWeight(a, b, number("weight.z"), p.ell);
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("weight: ") + e.what());
    }
}

EvenPiecewiseWeight RunConfig::weight() const
{
    if (weight_kind() != "piecewise") return stripe().to_piecewise();
    const PlateParams p = plate();
    std::vector<double> inner = numbers("weight.breakpoints");
    std::vector<double> vals = numbers("weight.values");
    if (vals.empty()) throw ConfigError("weight.values must list one value per piece");
    // interior breakpoints only; 0 and ell are implied
    std::vector<double> bps{0.0};
    bps.insert(bps.end(), inner.begin(), inner.end());
    bps.push_back(p.ell);
    try {
        const double lo = *std::min_element(vals.begin(), vals.end());
        const double hi = *std::max_element(vals.begin(), vals.end());
        return EvenPiecewiseWeight(std::move(bps), std::move(vals), lo, hi);
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("weight: ") + e.what());
    }
}

void RunConfig::validate() const
{
    plate();
    weight();
    for (const char* k : {"solver.tol", "verify.tol", "crosscheck.ip_tol", "crosscheck.fe_tol"})
        if (!(number(k) > 0.0)) throw ConfigError(std::string(k) + " must be positive");
    for (const char* k : {"solver.m", "solver.m_max", "solver.green_cells",
                          "sweep.points", "verify.m_max", "ppp.m_max", "ppp.cells", "mode.points",
                          "sublevel.nx", "sublevel.ny"})
        if (integer(k) < 1) throw ConfigError(std::string(k) + " must be >= 1");
    for (const char* k : {"verify.samples", "verify.pairs", "ppp.samples", "solver.fe_elements"})
        if (integer(k) < 0) throw ConfigError(std::string(k) + " must be >= 0");
    if (integer("solver.m_max") < 2) throw ConfigError("solver.m_max must be >= 2");
    if (number("sweep.beta_max") <= 1.0) throw ConfigError("sweep.beta_max must exceed 1");
    numbers("sweep.m");
    numbers("sweep.betas");
    numbers("spectrum.m");
    numbers("ppp.ells");
    numbers("crosscheck.m");
    numbers("crosscheck.ells");
    seed();
    if (text("spectrum.lambda_max") != "auto" && !(number("spectrum.lambda_max") > 0.0))
        throw ConfigError("spectrum.lambda_max must be positive or auto");
    const std::string f = text("sublevel.fraction");
    if (f != "auto") {
        const double v = number("sublevel.fraction");
        if (!(v > 0.0 && v < 1.0)) throw ConfigError("sublevel.fraction must lie in (0, 1)");
    }
    for (const auto& pair : split(text("crosscheck.pairs"), ',')) {
        const auto ab = split(pair, ':');
        if (ab.size() != 2) throw ConfigError("crosscheck.pairs entries look like alpha:beta");
        parse_number(ab[0]);
        parse_number(ab[1]);
    }
}

}  // namespace plate::cli
