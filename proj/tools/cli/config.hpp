#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "plate/plate_core.hpp"

namespace plate::cli {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Flat dotted key/value settings. Every key has a default; unknown keys are
// rejected.
class RunConfig {
public:
    RunConfig();

    // `key = value` lines, `#` starts a comment
    void load_file(const std::filesystem::path& path);
    void parse_text(const std::string& text, const std::string& origin = "<text>");
    // "key=value"
    void set(const std::string& assignment);
    void set(const std::string& key, const std::string& value);

    std::string text(const std::string& key) const;
    double number(const std::string& key) const;
    long integer(const std::string& key) const;
    std::vector<double> numbers(const std::string& key) const;
    std::uint64_t seed() const;

    PlateParams plate() const;
    // kind = unweighted | stripe | piecewise
    std::string weight_kind() const;
    TwoMaterialWeight stripe() const;
    EvenPiecewiseWeight weight() const;

    const std::map<std::string, std::string>& entries() const { return values_; }

    // validates every numeric key and the plate/weight combination
    void validate() const;

private:
    std::map<std::string, std::string> values_;
};

// "1.5", "pi", "pi/150", "2*pi", "3*pi/4"
double parse_number(const std::string& s);

}  // namespace plate::cli
