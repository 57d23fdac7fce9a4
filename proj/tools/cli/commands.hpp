#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "cli/config.hpp"

namespace plate::cli {

const std::vector<std::string>& command_names();

// Runs one experiment, writes <out>/<command>.csv and <out>/<command>.json.
// Returns 0 when every asserted invariant holds, 1 when one fails (named on
// `err`), 2 for an unknown command or an invalid configuration.
int run(const std::string& command, const RunConfig& config, const std::filesystem::path& out,
        std::ostream& err);

}  // namespace plate::cli
