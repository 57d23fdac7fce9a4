#include "cli/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace plate::cli {

std::string fmt(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}
std::string fmt(bool v) { return v ? "true" : "false"; }
std::string fmt(long v) { return std::to_string(v); }
std::string fmt(int v) { return std::to_string(v); }
std::string fmt(std::size_t v) { return std::to_string(v); }
std::string fmt(const std::string& v) { return v; }
std::string fmt(const char* v) { return v; }

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add(std::vector<std::string> cells)
{
    if (cells.size() != header_.size()) throw std::logic_error("csv row width mismatch");
    rows_.push_back(std::move(cells));
}

std::string CsvTable::str() const
{
    std::ostringstream os;
    auto cell = [&os](const std::string& c) {
        if (c.find_first_of(",\"\n") == std::string::npos) {
            os << c;
            return;
        }
        os << '"';
        for (char ch : c) os << (ch == '"' ? "\"\"" : std::string(1, ch));
        os << '"';
    };
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os << ',';
            cell(cells[i]);
        }
        os << '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return os.str();
}

void CsvTable::write(const std::filesystem::path& path) const
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << str();
}

void Verdicts::check(const std::string& name, bool pass, double margin, const std::string& detail)
{
    entries_.push_back({name, pass, margin, detail});
}

bool Verdicts::all_pass() const
{
    for (const auto& e : entries_)
        if (!e.pass) return false;
    return true;
}

std::vector<std::string> Verdicts::failures() const
{
    std::vector<std::string> out;
    for (const auto& e : entries_)
        if (!e.pass) out.push_back(e.detail.empty() ? e.name : e.name + " (" + e.detail + ")");
    return out;
}

Json Verdicts::to_json() const
{
    Json arr = Json::array();
    for (const auto& e : entries_) {
        Json j{{"name", e.name}, {"pass", e.pass}};
        j["margin"] = std::isfinite(e.margin) ? Json(e.margin) : Json(nullptr);
        if (!e.detail.empty()) j["detail"] = e.detail;
        arr.push_back(std::move(j));
    }
    return arr;
}

Bracket bracket(double lambda, int m, double beta)
{
    const double m4 = std::pow(double(m), 4);
    const double lo = m4 / beta;
    return {lo, m4, lo < lambda && lambda < m4};
}

void write_json(const std::filesystem::path& path, const Json& j)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

}  // namespace plate::cli
