#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace plate::cli {

using Json = nlohmann::ordered_json;

// 12 significant digits, shortest form
std::string fmt(double v);
std::string fmt(bool v);
std::string fmt(long v);
std::string fmt(int v);
std::string fmt(std::size_t v);
std::string fmt(const std::string& v);
std::string fmt(const char* v);

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    template <typename... Ts>
    void row(const Ts&... cells)
    {
        std::vector<std::string> r{fmt(cells)...};
        add(std::move(r));
    }
    void add(std::vector<std::string> cells);

    std::size_t rows() const { return rows_.size(); }
    std::string str() const;
    void write(const std::filesystem::path& path) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

// Named pass/fail assertions with margins (positive margin = satisfied).
class Verdicts {
public:
    void check(const std::string& name, bool pass, double margin, const std::string& detail = "");
    bool all_pass() const;
    // names of the failing assertions
    std::vector<std::string> failures() const;
    Json to_json() const;

private:
    struct Entry {
        std::string name;
        bool pass;
        double margin;
        std::string detail;
    };
    std::vector<Entry> entries_;
};

// Bracket columns shared by every table that emits lambda.
struct Bracket {
    double m4_over_beta;
    double m4;
    bool within;
};
Bracket bracket(double lambda, int m, double beta);

void write_json(const std::filesystem::path& path, const Json& j);

}  // namespace plate::cli
