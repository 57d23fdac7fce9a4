#include <iostream>
#include <string>
#include <vector>

#include <CLI11/CLI11.hpp>

#include "cli/commands.hpp"
#include "cli/config.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Eigenvalue experiments for a partially hinged reinforced plate"};
    app.set_version_flag("--version", "0.1.0");

    std::string command;
    std::string config_path;
    std::string out_dir = "out";
    std::string seed;
    std::vector<std::string> overrides;

    std::string names;
    for (const auto& n : plate::cli::command_names()) names += (names.empty() ? "" : ", ") + n;
    app.add_option("command", command, "one of: " + names)->required();
    app.add_option("--config", config_path, "flat key = value config file");
    app.add_option("--out", out_dir, "output directory")->capture_default_str();
    app.add_option("--seed", seed, "sampling seed (overrides run.seed)");
    app.add_option("--set", overrides, "override one key, key=value (repeatable)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    plate::cli::RunConfig cfg;
    try {
        if (!config_path.empty()) cfg.load_file(config_path);
        for (const auto& s : overrides) cfg.set(s);
        if (!seed.empty()) cfg.set("run.seed", seed);
    } catch (const plate::cli::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    }
    const int status = plate::cli::run(command, cfg, out_dir, std::cerr);
    if (status == 0) std::cout << command << ": all invariants hold, outputs in " << out_dir << '\n';
    return status;
}
